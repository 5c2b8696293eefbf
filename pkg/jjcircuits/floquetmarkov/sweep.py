'''Pump-power sweeps over independent Floquet-Markov points

Each grid point is solved from immutable inputs by a module-level worker, so
a process pool and a serial loop give identical reports. Points that fail
carry the error in their report; the sweep itself keeps going.
'''

import copy
import logging
import os
from multiprocessing import Pool

import attr
import munch
import numpy as np
import scipy
from numpy.linalg import LinAlgError

from . import (
    __version__,
    circuits,
    config,
    dissipator,
    floquet,
    hilbert,
    observables,
    utils,
)
from .errors import (
    ConvergenceError,
    FloquetMarkovError,
    KerrIdentificationError,
    ValidationError,
)

LEAKAGE_TOL = 1e-3
TRUNCATION_POPULATION_TOL = 1e-2
TRUNCATION_LINE_TOL_HZ = 1e5

SUMMARY_FIELDS = [
    "index", "model", "nbar_est", "A_p_over_2pi_MHz", "xi", "N_g", "ratio",
    "impurity", "mean_excitation", "ground_population", "leakage",
    "dominant_frequency_Hz", "dominant_weight", "runner_up_weight",
    "line_count", "kerr_Hz", "averaged_cavity_Hz", "averaged_kerr_Hz",
    "omega_a_tilde_over_2pi_Hz", "flagged", "error",
]
LINE_FIELDS = [
    "index", "nbar_est", "frequency", "weight", "relative_weight", "source",
    "target", "sideband",
]


@attr.s(frozen=True)
class SweepTask(object):
    index = attr.ib()
    cfg = attr.ib()
    nbar_est = attr.ib()
    A_p = attr.ib()


@attr.s(frozen=True, eq=False)
class PointSolution(object):
    params = attr.ib()
    frame = attr.ib()
    basis = attr.ib()
    hamiltonian = attr.ib()
    floquet_basis = attr.ib()
    fourier = attr.ib()
    gamma = attr.ib()
    L = attr.ib()
    steady = attr.ib()


def solve_point(cfg, params, basis=None, noise=None):
    '''Floquet modes, rates and steady state for one parameter record'''
    basis = basis or config.frame_basis(cfg)
    noise = noise or config.noise_model(cfg)
    frame = circuits.derive_frame(cfg.model, params)
    H = circuits.periodic_hamiltonian(cfg.model, params, basis, frame)
    fb = floquet.solve_floquet(
        H, params.period, int(cfg.floquet.n_samples),
        config.propagator_options(cfg),
    )
    coupling = circuits.bath_coupling(cfg.model, frame, basis)
    F = floquet.fourier_elements(fb, coupling, int(cfg.floquet.sidebands))
    gamma, L = dissipator.rates(F, fb, noise)
    steady = dissipator.steady_state(L, fb)
    return PointSolution(params, frame, basis, H, fb, F, gamma, L, steady)


def diagnostic_basis(model, params, resolution, n_levels):
    '''(eigenbasis, converged); an unconverged basis is still returned'''
    try:
        return circuits.diagnostic_eigenbasis(
            model, params, resolution, n_levels), True
    except ConvergenceError as error:
        logging.warning("[jjcircuits-floquetmarkov] " + str(error))
        return circuits.diagnostic_eigenbasis(
            model, params, resolution, n_levels, check=False), False


def _lines_report(cfg, solution):
    obs = cfg.observables
    center = cfg.omega_a_over_2pi_GHz * config.GHZ
    half_width = obs.window_MHz * config.MHZ
    lines = observables.stark_lines(
        solution.fourier, solution.floquet_basis, solution.steady, center,
        half_width, obs.weight_floor,
    )
    report = {
        "stark_lines": [line.as_row() for line in lines],
        "line_count": len(lines),
        "dominant_frequency_Hz": lines[0].frequency if lines else None,
        "dominant_weight": lines[0].weight if lines else None,
        "runner_up_weight": lines[1].weight if len(lines) > 1 else 0.0,
        "kerr_Hz": None,
        "kerr_error": None,
    }
    try:
        report["kerr_Hz"] = observables.kerr_strength(
            solution.fourier, solution.floquet_basis, solution.steady,
            center, half_width, obs.weight_floor,
        )
    except KerrIdentificationError as error:
        report["kerr_error"] = str(error)
    return report


def observe(cfg, solution):
    '''the report fields read off one solved point'''
    model = cfg.model
    params, frame, basis = solution.params, solution.frame, solution.basis
    rho = solution.steady.rho_t0
    n_levels = int(cfg.observables.n_levels)
    report = {"impurity": observables.impurity(rho)}

    if model == circuits.UNSHUNTED:
        reduced = hilbert.partial_trace(rho, basis, [0])
        diagnostic, converged = diagnostic_basis(
            model, params, basis.n_max(0), n_levels)
    else:
        tr = cfg.truncation
        physical = observables.to_physical_basis(
            rho, frame, basis, (int(tr.n_phys_b), int(tr.n_phys_a)))
        reduced = hilbert.partial_trace(physical, physical.basis, [0])
        diagnostic, converged = diagnostic_basis(
            model, params, int(tr.n_phys_b), n_levels)
        report["impurity_physical"] = observables.impurity(physical)
        report["frame_populations"] = observables.frame_populations(
            rho, basis, 0)
        report["omega_a_tilde_over_2pi_Hz"] = (
            frame.omega_a_tilde / config.TWO_PI)
        report["averaged_cavity_Hz"] = report["averaged_kerr_Hz"] = None
        try:
            cavity, kerr = observables.averaged_model_predictions(frame, basis)
            report["averaged_cavity_Hz"] = cavity
            report["averaged_kerr_Hz"] = kerr
        except KerrIdentificationError as error:
            report["averaged_error"] = str(error)

    populations, leakage = observables.populations_in_eigenbasis(
        reduced, diagnostic.vectors)
    report.update({
        "populations": populations,
        "leakage": leakage,
        "mean_excitation": observables.mean_excitation(populations),
        "ground_population": float(populations[0]),
    })
    report.update(_lines_report(cfg, solution))

    report["flags"] = {
        "degenerate": solution.floquet_basis.degeneracy_flag,
        "non_unique": solution.steady.non_unique,
        "leakage": bool(abs(leakage) > LEAKAGE_TOL),
        "fourier_tail": bool(
            solution.fourier.tail_fraction > floquet.TAIL_TOL),
        "diagnostic_unconverged": not converged,
    }
    return report


def bumped_truncation(cfg):
    '''the config with every frame truncation dimension one larger'''
    tr = dict(munch.unmunchify(cfg.truncation))
    for key in ("n_charge_max", "n_fock", "n_fock_b", "n_fock_a"):
        tr[key] = int(tr[key]) + 1
    tr["n_phys_b"] = max(int(tr["n_phys_b"]), tr["n_fock_b"])
    tr["n_phys_a"] = max(int(tr["n_phys_a"]), tr["n_fock_a"])
    return _variant(cfg, truncation=munch.munchify(tr))


def truncation_check(cfg, params, report):
    '''(population change, dominant line shift in Hz or None) between the
    point and its re-solve one truncation step larger'''
    bumped = bumped_truncation(cfg)
    other = observe(bumped, solve_point(bumped, params))
    count = min(len(report["populations"]), len(other["populations"]))
    change = float(np.max(np.abs(
        np.asarray(report["populations"][:count])
        - np.asarray(other["populations"][:count])
    )))
    shift = None
    if (report["dominant_frequency_Hz"] is not None
            and other["dominant_frequency_Hz"] is not None):
        shift = abs(report["dominant_frequency_Hz"]
                    - other["dominant_frequency_Hz"])
    return change, shift


def _check_truncation(cfg, params, report):
    try:
        change, shift = truncation_check(cfg, params, report)
    except (FloquetMarkovError, LinAlgError) as error:
        logging.warning(
            "[jjcircuits-floquetmarkov] truncation check failed: {}"
            .format(error)
        )
        change, shift = None, None
    report["truncation_population_change"] = change
    report["truncation_line_shift_Hz"] = shift
    report["flags"]["truncation_unconverged"] = bool(
        change is None
        or change > TRUNCATION_POPULATION_TOL
        or (shift is not None and shift > TRUNCATION_LINE_TOL_HZ)
    )


def _base_report(task, params):
    cfg = task.cfg
    return {
        "index": task.index,
        "model": cfg.model,
        "nbar_est": task.nbar_est,
        "A_p_over_2pi_MHz": task.A_p / (config.TWO_PI * config.MHZ),
        "N_g": params.N_g if cfg.model == circuits.UNSHUNTED else None,
        "ratio": (params.E_L / params.E_J
                  if cfg.model == circuits.SHUNTED and params.E_J > 0
                  else None),
        "params": attr.asdict(params),
        "error": None,
    }


def run_point(task):
    '''(report, Floquet modes at t = 0 or None) for one grid point'''
    params = config.circuit_params(task.cfg, task.A_p)
    report = _base_report(task, params)
    try:
        solution = solve_point(task.cfg, params)
        report["xi"] = solution.frame.xi
        report.update(observe(task.cfg, solution))
        if task.cfg.truncation.get("check"):
            _check_truncation(task.cfg, params, report)
        report["quasi_energies_Hz"] = (
            solution.floquet_basis.quasi_energies / config.TWO_PI)
        modes = solution.floquet_basis.modes_t0
    except (FloquetMarkovError, LinAlgError) as error:
        logging.error(
            "[jjcircuits-floquetmarkov] point {} (nbar_est {:g}) failed: {}"
            .format(task.index, task.nbar_est, error)
        )
        report["error"] = "{}: {}".format(type(error).__name__, error)
        modes = None
    report["flagged"] = bool(any(report.get("flags", {}).values()))
    return utils.to_plain(report), modes


def track_branches(results):
    '''reorder quasi-energies so index i follows one branch across points'''
    previous = None
    for report, modes in results:
        if modes is None:
            continue
        if previous is None or previous.shape != modes.shape:
            order = np.arange(modes.shape[1])
            overlaps = np.ones(modes.shape[1])
        else:
            order, overlaps = floquet.match_modes(previous, modes)
        report["quasi_energies_Hz"] = [
            report["quasi_energies_Hz"][i] for i in order]
        report["branch_order"] = [int(i) for i in order]
        report["branch_overlap_min"] = float(np.min(overlaps))
        previous = modes[:, order]


def build_tasks(cfg):
    return [
        SweepTask(index, cfg, nbar, A_p)
        for index, (nbar, A_p) in enumerate(config.pump_grid(cfg))
    ]


def map_points(tasks, workers=1):
    '''ordered results of run_point over tasks'''
    if workers <= 1 or len(tasks) <= 1:
        return [run_point(task) for task in tasks]
    pool = Pool(processes=min(workers, len(tasks)))
    try:
        return pool.map(run_point, tasks)
    finally:
        pool.close()
        pool.join()


def build_manifest(cfg, reports):
    return {
        "package": "jjcircuits-floquetmarkov",
        "version": __version__,
        "libraries": {
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "attrs": attr.__version__,
            "munch": getattr(munch, "__version__", "unknown"),
        },
        "config": munch.unmunchify(cfg),
        "points": len(reports),
        "failed": [r["index"] for r in reports if r["error"]],
        "flagged": [r["index"] for r in reports if r["flagged"]],
    }


def run_sweep(cfg, workers=None, out_dir=None):
    '''(reports, manifest) over the configured pump grid'''
    workers = int(workers or cfg.get("workers", 1))
    tasks = build_tasks(cfg)
    logging.info(
        "[jjcircuits-floquetmarkov] sweeping {} {} points on {} workers"
        .format(len(tasks), cfg.model, workers)
    )
    results = map_points(tasks, workers)
    track_branches(results)
    reports = [report for report, _ in results]
    manifest = build_manifest(cfg, reports)
    if out_dir:
        manifest["files"] = write_sweep(out_dir, cfg, reports, manifest)
    logging.info(
        "[jjcircuits-floquetmarkov] sweep done: {} failed, {} flagged".format(
            len(manifest["failed"]), len(manifest["flagged"]))
    )
    return reports, manifest


def write_sweep(out_dir, cfg, reports, manifest):
    '''per-point records, aggregate tables, resolved config and manifest'''
    output = {}
    points_dir = utils.create_dir(os.path.join(out_dir, "points"))
    for report in reports:
        filepath = utils.create_filepath(
            points_dir, "point", "{:03d}".format(report["index"]), "json")
        utils.write_to_json(filepath, report)
    output["points"] = points_dir

    summary = utils.create_filepath(out_dir, "sweep", None, "csv")
    utils.write_to_csv(summary, SUMMARY_FIELDS, reports)
    utils.append_to_output(output, "csv", "sweep", summary)

    lines = utils.create_filepath(out_dir, "stark_lines", None, "csv")
    utils.write_to_csv(lines, LINE_FIELDS, line_rows(reports))
    utils.append_to_output(output, "csv", "stark_lines", lines)

    resolved = utils.create_filepath(out_dir, "config", None, "json")
    config.dump_config(cfg, resolved)
    utils.append_to_output(output, "json", "config", resolved)

    filepath = utils.create_filepath(out_dir, "manifest", None, "json")
    utils.append_to_output(output, "json", "manifest", filepath)
    utils.write_to_json(filepath, dict(manifest, files=output))
    return output


def line_rows(reports):
    rows = []
    for report in reports:
        for line in report.get("stark_lines") or []:
            rows.append(dict(line, index=report["index"],
                             nbar_est=report["nbar_est"]))
    return rows


# ----------------------------------------------------------------------------
# studies
# ----------------------------------------------------------------------------

def _variant(cfg, **changes):
    variant = munch.munchify(copy.deepcopy(munch.unmunchify(cfg)))
    variant.update(changes)
    return config.validate(variant)


def _study_dir(out_dir, name, value):
    if not out_dir:
        return None
    return utils.create_dir(os.path.join(out_dir, "{}-{:g}".format(name, value)))


def run_ng_study(cfg, workers=None, out_dir=None):
    '''{N_g: reports}, one unshunted sweep per offset charge'''
    if cfg.model != circuits.UNSHUNTED:
        raise ValidationError(
            {"constraints": ["offset-charge study needs the unshunted model"]})
    studies = {}
    for N_g in cfg.studies.ng_values:
        variant = _variant(cfg, N_g=float(N_g))
        reports, _ = run_sweep(variant, workers, _study_dir(out_dir, "ng", N_g))
        studies[float(N_g)] = reports
    return studies


def run_ratio_study(cfg, workers=None, out_dir=None):
    '''{E_L / E_J: reports} at fixed E_J + E_L'''
    config.validate_ratio_study(cfg)
    total = cfg.studies.sum_EJ_EL_over_h_GHz
    studies = {}
    for ratio in cfg.studies.ratio_values:
        E_J, E_L = config.ratio_energies(total, float(ratio))
        variant = _variant(cfg, EJ_over_h_GHz=E_J, EL_over_h_GHz=E_L)
        reports, _ = run_sweep(variant, workers,
                               _study_dir(out_dir, "ratio", ratio))
        studies[float(ratio)] = reports
    return studies
