'''Plot tables and SVG renderings from sweep reports

The CSV tables are the deliverable; the SVG files are a quick look. Every
table carries a "flagged" column so points with convergence or degeneracy
flags are never mixed silently with clean ones.
'''

import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import utils  # noqa: E402
from .errors import FigureDataError, ValidationError  # noqa: E402

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")

REQUIRED = {
    "fig1": ("nbar_est", "populations", "mean_excitation", "stark_lines",
             "impurity"),
    "fig2": ("nbar_est", "xi", "dominant_frequency_Hz", "averaged_cavity_Hz",
             "kerr_Hz", "averaged_kerr_Hz", "omega_a_tilde_over_2pi_Hz"),
    "fig3": ("nbar_est", "populations", "frame_populations"),
    "fig4": ("nbar_est", "N_g", "impurity", "mean_excitation"),
    "fig5": ("nbar_est", "ratio", "impurity"),
}


def figure_name(which):
    '''1, "1", "fig1" -> "fig1"'''
    name = str(which)
    if not name.startswith("fig"):
        name = "fig" + name
    if name not in FIGURES:
        raise ValidationError(
            {"constraints": ["Unknown figure '{}'; choose one of {}".format(
                which, ", ".join(FIGURES))]}
        )
    return name


def missing_columns(reports, columns):
    '''columns with no value in any report'''
    return [
        column for column in columns
        if all(report.get(column) is None for report in reports)
    ]


def _level_columns(prefix, count):
    return ["{}_{}".format(prefix, k) for k in range(count)]


def _spread(row, prefix, values, count):
    for k in range(count):
        row["{}_{}".format(prefix, k)] = values[k] if k < len(values) else 0.0
    return row


def fig1_tables(reports, n_levels):
    points, lines = [], []
    for report in reports:
        row = {
            "nbar_est": report["nbar_est"],
            "impurity": report["impurity"],
            "mean_excitation": report["mean_excitation"],
            "flagged": report.get("flagged", False),
        }
        points.append(_spread(row, "pop", report["populations"], n_levels))
        for line in report["stark_lines"]:
            lines.append({
                "nbar_est": report["nbar_est"],
                "frequency_GHz": line["frequency"] / 1e9,
                "weight": line["weight"],
                "relative_weight": line["relative_weight"],
                "flagged": report.get("flagged", False),
            })
    point_fields = (["nbar_est", "impurity", "mean_excitation"]
                    + _level_columns("pop", n_levels) + ["flagged"])
    line_fields = ["nbar_est", "frequency_GHz", "weight", "relative_weight",
                   "flagged"]
    return [("fig1", point_fields, points),
            ("fig1_lines", line_fields, lines)]


def fig2_tables(reports, n_levels):
    rows = []
    for report in reports:
        reference = report["omega_a_tilde_over_2pi_Hz"]
        frequency = report.get("dominant_frequency_Hz")
        rows.append({
            "nbar_est": report["nbar_est"],
            "xi": report["xi"],
            "dominant_frequency_Hz": frequency,
            "stark_shift_Hz": (None if frequency is None
                               else frequency - reference),
            "averaged_cavity_Hz": report.get("averaged_cavity_Hz"),
            "kerr_Hz": report.get("kerr_Hz"),
            "averaged_kerr_Hz": report.get("averaged_kerr_Hz"),
            "flagged": report.get("flagged", False),
        })
    fields = ["nbar_est", "xi", "dominant_frequency_Hz", "stark_shift_Hz",
              "averaged_cavity_Hz", "kerr_Hz", "averaged_kerr_Hz", "flagged"]
    return [("fig2", fields, rows)]


def fig3_tables(reports, n_levels):
    n_fock = max(len(report["frame_populations"]) for report in reports)
    rows = []
    for report in reports:
        row = {"nbar_est": report["nbar_est"],
               "flagged": report.get("flagged", False)}
        _spread(row, "pop", report["populations"], n_levels)
        rows.append(_spread(row, "fock_b", report["frame_populations"],
                            n_fock))
    fields = (["nbar_est"] + _level_columns("pop", n_levels)
              + _level_columns("fock_b", n_fock) + ["flagged"])
    return [("fig3", fields, rows)]


def fig4_tables(reports, n_levels):
    rows = [{
        "N_g": report["N_g"],
        "nbar_est": report["nbar_est"],
        "impurity": report["impurity"],
        "mean_excitation": report["mean_excitation"],
        "flagged": report.get("flagged", False),
    } for report in reports]
    rows.sort(key=lambda row: (row["N_g"], row["nbar_est"]))
    return [("fig4", ["N_g", "nbar_est", "impurity", "mean_excitation",
                      "flagged"], rows)]


def fig5_tables(reports, n_levels):
    rows = [{
        "ratio": report["ratio"],
        "nbar_est": report["nbar_est"],
        "impurity": report["impurity"],
        "flagged": report.get("flagged", False),
    } for report in reports]
    rows.sort(key=lambda row: (row["ratio"], row["nbar_est"]))
    return [("fig5", ["ratio", "nbar_est", "impurity", "flagged"], rows)]


TABLES = {
    "fig1": fig1_tables,
    "fig2": fig2_tables,
    "fig3": fig3_tables,
    "fig4": fig4_tables,
    "fig5": fig5_tables,
}


# ----------------------------------------------------------------------------
# renderings
# ----------------------------------------------------------------------------

def _column(rows, key):
    return [row[key] for row in rows]


def _scaled(rows, key, scale):
    return [float("nan") if row[key] is None else row[key] / scale
            for row in rows]


def _marker_colors(rows, clean, flagged="tab:orange"):
    return [flagged if row["flagged"] else clean for row in rows]


def render_fig1(tables, n_levels):
    points, lines = tables["fig1"], tables["fig1_lines"]
    fig, (ax_pop, ax_lines) = plt.subplots(2, 1, figsize=(7, 8), sharex=True)
    nbar = _column(points, "nbar_est")
    for k in range(n_levels):
        ax_pop.plot(nbar, _column(points, "pop_{}".format(k)), lw=0.8,
                    label="k={}".format(k) if k < 10 else None)
    ax_exc = ax_pop.twinx()
    ax_exc.scatter(nbar, _column(points, "mean_excitation"), color="red",
                   s=12)
    ax_pop.set_ylabel("population")
    ax_exc.set_ylabel("mean excitation")
    ax_pop.legend(loc="upper right", fontsize="x-small", ncol=2)

    ax_lines.scatter(
        _column(lines, "nbar_est"), _column(lines, "frequency_GHz"),
        s=[40.0 * w for w in _column(lines, "relative_weight")],
        c=_marker_colors(lines, "tab:blue"),
    )
    ax_imp = ax_lines.twinx()
    ax_imp.scatter(nbar, _column(points, "impurity"), marker="x",
                   color="black")
    ax_lines.set_xlabel("nbar_est")
    ax_lines.set_ylabel("Stark-shifted frequency (GHz)")
    ax_imp.set_ylabel("impurity")
    return fig


def render_fig2(tables, n_levels):
    rows = tables["fig2"]
    fig, (ax_f, ax_k) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    nbar = _column(rows, "nbar_est")
    ax_f.scatter(nbar, _scaled(rows, "dominant_frequency_Hz", 1e9),
                 c=_marker_colors(rows, "tab:blue"), s=12)
    ax_f.plot(nbar, _scaled(rows, "averaged_cavity_Hz", 1e9),
              color="tab:orange")
    ax_f.set_ylabel("frequency (GHz)")
    ax_k.scatter(nbar, _scaled(rows, "kerr_Hz", 1e3),
                 c=_marker_colors(rows, "tab:blue"), s=12)
    ax_k.plot(nbar, _scaled(rows, "averaged_kerr_Hz", 1e3),
              color="tab:orange")
    ax_k.axhline(0.0, color="grey", lw=0.5)
    ax_k.set_xlabel("nbar_est")
    ax_k.set_ylabel("Kerr (kHz)")
    return fig


def render_fig3(tables, n_levels):
    rows = tables["fig3"]
    fig, (ax_nu, ax_b) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    nbar = _column(rows, "nbar_est")
    for k in range(n_levels):
        ax_nu.plot(nbar, _column(rows, "pop_{}".format(k)), lw=0.8)
    fock = [key for key in rows[0] if key.startswith("fock_b_")]
    for key in fock:
        ax_b.plot(nbar, _column(rows, key), lw=0.8)
    ax_nu.set_ylabel("population (shunted-transmon levels)")
    ax_b.set_ylabel("population (b~ Fock states)")
    ax_b.set_xlabel("nbar_est")
    return fig


def _grouped(rows, key, fig_size=(7, 4)):
    fig, ax = plt.subplots(figsize=fig_size)
    for value in sorted(set(_column(rows, key))):
        group = [row for row in rows if row[key] == value]
        ax.plot(_column(group, "nbar_est"), _column(group, "impurity"),
                marker="x", label="{} = {:g}".format(key, value))
    ax.set_xlabel("nbar_est")
    ax.set_ylabel("impurity")
    ax.legend()
    return fig


def render_fig4(tables, n_levels):
    return _grouped(tables["fig4"], "N_g")


def render_fig5(tables, n_levels):
    return _grouped(tables["fig5"], "ratio")


RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
}


def emit_figures(reports, which, out_dir, n_levels=20, render=True):
    '''Write the tables (and SVG) of one figure; returns written paths'''
    name = figure_name(which)
    usable = [report for report in reports or [] if not report.get("error")]
    if not usable:
        logging.warning(
            "[jjcircuits-floquetmarkov] no usable reports for {}; nothing "
            "written".format(name)
        )
        return {}

    missing = missing_columns(usable, REQUIRED[name])
    if missing:
        raise FigureDataError(name, missing)

    utils.create_dir(out_dir)
    output = {}
    tables = {}
    for table, fields, rows in TABLES[name](usable, n_levels):
        filepath = utils.create_filepath(out_dir, table, None, "csv")
        utils.write_to_csv(filepath, fields, rows)
        utils.append_to_output(output, "csv", table, filepath)
        tables[table] = rows

    if render:
        fig = RENDERERS[name](tables, n_levels)
        filepath = utils.create_filepath(out_dir, name, None, "svg")
        fig.savefig(filepath, format="svg")
        plt.close(fig)
        utils.append_to_output(output, "svg", name, filepath)

    logging.info("[jjcircuits-floquetmarkov] emitted {} ({} points)".format(
        name, len(usable)))
    return output
