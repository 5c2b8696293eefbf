"""the spectrum(), sweep(), ng_study(), ratio_study(), validate() and
emit_figures() functions
These functions are the top level logic behind the jjfm commands.

Every action takes (context, data_dict):
    context: run settings, "workers" and "out_dir" (both optional)
    data_dict: the problem, "config" (path), "preset", "overrides" and
        the action-specific inputs documented on each function
"""
import logging
import os

import attr
import munch
import numpy as np

from . import (
    circuits,
    config,
    dissipator,
    figures,
    observables,
    oracle,
    sweep as sweeps,
    utils,
)
from .errors import (
    FloquetMarkovError,
    KerrIdentificationError,
    ValidationError,
)

TREND_SLACK = 1e-4


def _config(data_dict):
    if not isinstance(data_dict.get("overrides") or {}, dict):
        raise ValidationError(
            {"constraints": ["'overrides' must be a mapping of config fields"]}
        )
    return config.load_config(
        data_dict.get("config"),
        data_dict.get("preset") or "paper",
        data_dict.get("overrides"),
    )


def _workers(context, cfg):
    workers = context.get("workers") or cfg.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ValidationError(
            {"constraints": ["'workers' must be a positive integer"]}
        )
    return workers


def _out_dir(context, cfg):
    return utils.create_dir(context.get("out_dir") or cfg.output_dir)


def _summary(reports):
    return {
        "points": len(reports),
        "failed": [r["index"] for r in reports if r["error"]],
        "flagged": [r["index"] for r in reports if r["flagged"]],
    }


def spectrum(context, data_dict):
    '''
    inputs:
        the config; the pump amplitude is ignored (A_p = 0)

    outputs:
        dressed cavity/qubit frequencies, anharmonicity, Kerr terms (Hz),
        confined-level count and estimate, diagnostic energies (Hz)
        written to spectrum.json in the output directory
    '''
    logging.info("[jjcircuits-floquetmarkov] Starting actions.spectrum")
    cfg = _config(data_dict)
    params = config.circuit_params(cfg, 0.0)
    basis = config.frame_basis(cfg)
    output = {"model": cfg.model, "params": attr.asdict(params),
              "error": None}

    try:
        dressed = observables.static_spectrum(cfg.model, params, basis)
        output.update({
            "cavity_Hz": dressed.cavity,
            "qubit_Hz": dressed.qubit,
            "anharmonicity_Hz": dressed.anharmonicity,
            "cavity_kerr_Hz": dressed.cavity_kerr,
            "cross_kerr_Hz": dressed.cross_kerr,
        })
    except KerrIdentificationError as error:
        logging.warning("[jjcircuits-floquetmarkov] " + str(error))
        output["error"] = str(error)

    resolution = (cfg.truncation.n_charge_max
                  if cfg.model == circuits.UNSHUNTED
                  else cfg.truncation.n_phys_b)
    n_levels = int(cfg.observables.n_levels)
    diagnostic, converged = sweeps.diagnostic_basis(
        cfg.model, params, int(resolution), n_levels)
    energies = diagnostic.energies[:n_levels] - diagnostic.energies[0]
    output.update({
        "confined_levels": circuits.confined_level_count(
            diagnostic, params.E_J),
        "confined_levels_estimate": circuits.confined_level_estimate(
            diagnostic, params.E_J),
        "diagnostic_energies_Hz": energies / config.TWO_PI,
        "diagnostic_converged": converged,
    })
    if cfg.model == circuits.SHUNTED:
        frame = circuits.derive_frame(cfg.model, params)
        output["omega_a_tilde_over_2pi_Hz"] = (
            frame.omega_a_tilde / config.TWO_PI)

    output = utils.to_plain(output)
    filepath = utils.create_filepath(_out_dir(context, cfg), "spectrum",
                                     None, "json")
    utils.write_to_json(filepath, output)
    output["file"] = filepath
    logging.info("[jjcircuits-floquetmarkov] Finished actions.spectrum")
    return output


def sweep(context, data_dict):
    '''
    inputs:
        the config, with either nbar_est_grid or A_p_over_2pi_MHz_grid

    outputs:
        per-point JSON records, sweep.csv, stark_lines.csv, the resolved
        config and a manifest in the output directory
        returns the written files plus failed and flagged point indices
    '''
    logging.info("[jjcircuits-floquetmarkov] Starting actions.sweep")
    cfg = _config(data_dict)
    out_dir = _out_dir(context, cfg)
    reports, manifest = sweeps.run_sweep(cfg, _workers(context, cfg), out_dir)
    output = dict(_summary(reports), out_dir=out_dir,
                  files=manifest["files"])
    logging.info("[jjcircuits-floquetmarkov] Finished actions.sweep")
    return output


def _study_output(studies, out_dir):
    output = {"out_dir": out_dir, "studies": {}, "failed": []}
    for value, reports in sorted(studies.items()):
        summary = _summary(reports)
        output["studies"]["{:g}".format(value)] = summary
        output["failed"].extend(
            "{:g}/{}".format(value, index) for index in summary["failed"])
    return output


def ng_study(context, data_dict):
    '''
    inputs:
        an unshunted config; studies.ng_values lists the offset charges

    outputs:
        one sweep directory per offset charge, ng-<value>/
    '''
    logging.info("[jjcircuits-floquetmarkov] Starting actions.ng_study")
    cfg = _config(data_dict)
    out_dir = _out_dir(context, cfg)
    studies = sweeps.run_ng_study(cfg, _workers(context, cfg), out_dir)
    logging.info("[jjcircuits-floquetmarkov] Finished actions.ng_study")
    return _study_output(studies, out_dir)


def ratio_study(context, data_dict):
    '''
    inputs:
        a shunted config whose EJ + EL equals studies.sum_EJ_EL_over_h_GHz;
        studies.ratio_values lists E_L / E_J

    outputs:
        one sweep directory per ratio, ratio-<value>/
    '''
    logging.info("[jjcircuits-floquetmarkov] Starting actions.ratio_study")
    cfg = _config(data_dict)
    out_dir = _out_dir(context, cfg)
    studies = sweeps.run_ratio_study(cfg, _workers(context, cfg), out_dir)
    logging.info("[jjcircuits-floquetmarkov] Finished actions.ratio_study")
    return _study_output(studies, out_dir)


# ----------------------------------------------------------------------------
# oracle comparison
# ----------------------------------------------------------------------------

def _oracle_cfg(cfg):
    '''the config at the oracle's reduced truncation and overrides'''
    base = munch.unmunchify(cfg)
    resolved = config.merge(base, cfg.oracle.get("overrides") or {})
    for key in ("n_charge_max", "n_fock", "n_fock_b", "n_fock_a"):
        resolved["truncation"][key] = cfg.oracle[key]
    return config.validate(munch.munchify(resolved))


def _slowest_rate(solution, kappa):
    '''Floquet-Markov relaxation rate per unit kappa, or None'''
    try:
        return dissipator.relaxation_rate(solution.L) / kappa
    except FloquetMarkovError as error:
        logging.warning("[jjcircuits-floquetmarkov] " + str(error))
        return None


def _run_oracle(solution, small, kappa, noise, rate_per_kappa=None):
    omega_a = config.TWO_PI * small.omega_a_over_2pi_GHz * config.GHZ
    n_th = float(noise.n_th(omega_a))
    collapse = oracle.oracle_collapse_operators(
        small.model, solution.frame, solution.basis, kappa, n_th)
    settings = oracle.OracleConfig(
        kappa,
        n_th=n_th,
        tol=small.oracle.tol,
        steps_per_period=small.oracle.steps_per_period,
        method=small.floquet.method,
        slowest_rate=(rate_per_kappa * kappa if rate_per_kappa else None),
    )
    entry = {"kappa_over_2pi_Hz": kappa / config.TWO_PI, "error": None}
    try:
        result = oracle.lindblad_steady_state(
            solution.hamiltonian, collapse, settings,
            T=solution.params.period)
    except FloquetMarkovError as error:
        logging.error(
            "[jjcircuits-floquetmarkov] oracle at kappa/2pi = {:.4g} Hz "
            "failed: {}".format(entry["kappa_over_2pi_Hz"], error)
        )
        entry.update(trace_distance=None, fidelity=None,
                     error="{}: {}".format(type(error).__name__, error))
        return entry
    distance, fidelity = oracle.compare(result.rho_t0,
                                        solution.steady.rho_t0)
    entry.update({
        "trace_distance": distance,
        "fidelity": fidelity,
        "periods": result.periods,
        "residual": result.residual,
        "trace_error": result.trace_error,
        "min_eigenvalue": result.min_eigenvalue,
        "step_doubling_error": result.step_error,
    })
    return entry


def trend_decreasing(distances, slack=TREND_SLACK):
    '''trace distances ordered by decreasing kappa never grow past slack;
    a failed run (None) breaks the trend'''
    if any(distance is None for distance in distances):
        return False
    return all(b <= a + slack for a, b in zip(distances, distances[1:]))


def validate(context, data_dict):
    '''
    inputs:
        the config; its "oracle" section sets the reduced truncation, the
        pump point (nbar_est), the decay rate, the kappa trend (fractions
        of the first excitation gap) and the pass threshold

    outputs:
        trace distance and fidelity between the Floquet-Markov and the
        Lindblad steady states at t = 0, the kappa trend and a pass flag,
        written to validate.json
    '''
    logging.info("[jjcircuits-floquetmarkov] Starting actions.validate")
    cfg = _config(data_dict)
    small = _oracle_cfg(cfg)
    basis = config.frame_basis(small)
    if basis.total_dim > oracle.OracleConfig(1.0).max_dim:
        raise ValidationError(
            {"constraints": ["oracle truncation has {} states; reduce it "
                             "below {}".format(
                                 basis.total_dim,
                                 oracle.OracleConfig(1.0).max_dim)]}
        )

    omega_a = config.TWO_PI * small.omega_a_over_2pi_GHz * config.GHZ
    omega_p = config.TWO_PI * small.omega_p_over_2pi_GHz * config.GHZ
    A_p = circuits.pump_amplitude_for_nbar(small.oracle.nbar_est, omega_a,
                                           omega_p)
    params = config.circuit_params(small, A_p)
    kappa = config.TWO_PI * small.oracle.kappa_over_2pi_kHz * config.KHZ
    noise = dissipator.NoiseModel.from_linewidth(
        kappa, small.get("temperature_K") or 0.0)
    solution = sweeps.solve_point(small, params, basis, noise)

    output = {
        "model": small.model,
        "nbar_est": small.oracle.nbar_est,
        "dim": basis.total_dim,
        "params": attr.asdict(params),
    }
    rate_per_kappa = _slowest_rate(solution, kappa)
    output.update(_run_oracle(solution, small, kappa, noise, rate_per_kappa))

    levels = np.linalg.eigvalsh(solution.hamiltonian(0.0))
    gap = levels[1] - levels[0]
    trend = []
    for fraction in sorted(small.oracle.kappa_gap_fractions, reverse=True):
        entry = _run_oracle(solution, small, fraction * gap, noise,
                            rate_per_kappa)
        entry["gap_fraction"] = fraction
        trend.append(entry)
    output["gap_over_2pi_Hz"] = gap / config.TWO_PI
    output["kappa_trend"] = trend
    output["trend_decreasing"] = trend_decreasing(
        [entry["trace_distance"] for entry in trend])
    output["max_trace_distance"] = small.oracle.max_trace_distance
    distance = output["trace_distance"]
    output["passed"] = bool(
        distance is not None
        and distance < small.oracle.max_trace_distance
        and output["trend_decreasing"]
    )
    if not output["passed"]:
        logging.warning(
            "[jjcircuits-floquetmarkov] oracle comparison failed: trace "
            "distance {}, error {}".format(distance, output["error"])
        )

    output = utils.to_plain(output)
    filepath = utils.create_filepath(_out_dir(context, small), "validate",
                                     None, "json")
    utils.write_to_json(filepath, output)
    output["file"] = filepath
    logging.info("[jjcircuits-floquetmarkov] Finished actions.validate")
    return output


# ----------------------------------------------------------------------------
# figures
# ----------------------------------------------------------------------------

def load_reports(reports_dir):
    '''every points/point-*.json below reports_dir, in path order'''
    paths = []
    for root, _, files in os.walk(reports_dir):
        if os.path.basename(root) != "points":
            continue
        paths.extend(
            os.path.join(root, name) for name in files
            if name.startswith("point-") and name.endswith(".json")
        )
    return [utils.read_json(path) for path in sorted(paths)]


def emit_figures(context, data_dict):
    '''
    inputs:
        figure: 1..5 or fig1..fig5
        reports_dir: a sweep or study output directory (searched
            recursively for point records)
        n_levels: populations per row (default 20)

    outputs:
        figure tables (CSV) and an SVG rendering in <out_dir>/figures
    '''
    logging.info("[jjcircuits-floquetmarkov] Starting actions.emit_figures")
    if not data_dict.get("figure"):
        raise ValidationError({"constraints": ["Input 'figure' required!"]})
    name = figures.figure_name(data_dict["figure"])

    reports_dir = data_dict.get("reports_dir") or context.get("out_dir")
    if not reports_dir or not os.path.isdir(reports_dir):
        raise ValidationError(
            {"constraints": ["'reports_dir' must be an existing sweep "
                             "output directory"]}
        )
    out_dir = os.path.join(context.get("out_dir") or reports_dir, "figures")
    output = figures.emit_figures(
        load_reports(reports_dir), name, out_dir,
        n_levels=int(data_dict.get("n_levels") or 20),
        render=data_dict.get("render", True),
    )
    logging.info("[jjcircuits-floquetmarkov] Finished actions.emit_figures")
    return output
