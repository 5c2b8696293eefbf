'''Sweep configuration: JSON files merged over a packaged preset

Field names carry their units (EJ_over_h_GHz, g_over_2pi_MHz, ...). Values
are converted to angular frequencies (rad/s) only when parameter records are
built, so a resolved config dumps back to the same JSON it was read from.
'''

import copy
import json
import logging
import os

import munch
import numpy as np

from . import circuits, dissipator, floquet
from .errors import ValidationError
from .hilbert import BasisSpec

TWO_PI = 2 * np.pi
KHZ = 1e3
MHZ = 1e6
GHZ = 1e9

PRESETS = ("paper", "ci")
PRESET_DIR = os.path.join(os.path.dirname(os.path.realpath(__file__)),
                          "presets")
SUM_TOL = 1e-6


def preset_path(name):
    '''packaged preset file for a preset name'''
    if name not in PRESETS:
        raise ValidationError(
            {"constraints": ["Unknown preset '{}'; choose one of {}".format(
                name, ", ".join(PRESETS))]}
        )
    return os.path.join(PRESET_DIR, name + ".json")


def merge(base, override):
    '''recursive dict merge; override wins, nested dicts are merged'''
    merged = copy.deepcopy(dict(base))
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def read_json(path):
    try:
        with open(path, "r") as f:
            return json.load(f)
    except (IOError, OSError) as error:
        raise ValidationError(
            {"constraints": ["Cannot read config {}: {}".format(path, error)]}
        )
    except ValueError as error:
        raise ValidationError(
            {"constraints": ["Config {} is not valid JSON: {}".format(
                path, error)]}
        )


def load_config(path=None, preset="paper", overrides=None):
    '''preset <- config file <- overrides, validated, as a Munch'''
    resolved = read_json(preset_path(preset))
    layers = [read_json(path)] if path else []
    layers.append(overrides or {})
    for layer in layers:
        resolved = merge(resolved, layer)
        # a layer naming one pump axis replaces the other
        if layer.get("A_p_over_2pi_MHz_grid") and "nbar_est_grid" not in layer:
            resolved["nbar_est_grid"] = None
        if layer.get("nbar_est_grid") and "A_p_over_2pi_MHz_grid" not in layer:
            resolved["A_p_over_2pi_MHz_grid"] = None
    resolved["preset"] = preset
    cfg = munch.munchify(resolved)
    validate(cfg)
    logging.info(
        "[jjcircuits-floquetmarkov] loaded {} config (preset {})".format(
            cfg.model, preset)
    )
    return cfg


def dump_config(cfg, path):
    with open(path, "w") as f:
        json.dump(munch.unmunchify(cfg), f, indent=2, sort_keys=True)
    return path


def _strictly_increasing(values):
    return all(b > a for a, b in zip(values, values[1:]))


def validate(cfg):
    '''collect every problem and raise them together'''
    problems = []

    if cfg.get("model") not in circuits.MODELS:
        problems.append("'model' must be one of {}".format(
            ", ".join(circuits.MODELS)))

    for key in ("EC_over_h_MHz", "EJ_over_h_GHz", "omega_a_over_2pi_GHz",
                "omega_p_over_2pi_GHz", "kappa_over_2pi_kHz"):
        value = cfg.get(key)
        if not isinstance(value, (int, float)) or value <= 0:
            problems.append("'{}' must be a positive number".format(key))
    if cfg.get("model") == circuits.SHUNTED:
        value = cfg.get("EL_over_h_GHz")
        if not isinstance(value, (int, float)) or value <= 0:
            problems.append("'EL_over_h_GHz' must be a positive number "
                            "for the shunted model")
    temperature = cfg.get("temperature_K") or 0.0
    if (not isinstance(temperature, (int, float))
            or isinstance(temperature, bool) or temperature < 0):
        problems.append("'temperature_K' must be a non-negative number")

    nbar_grid = cfg.get("nbar_est_grid")
    amplitude_grid = cfg.get("A_p_over_2pi_MHz_grid")
    if bool(nbar_grid) == bool(amplitude_grid):
        problems.append("Give exactly one of 'nbar_est_grid' and "
                        "'A_p_over_2pi_MHz_grid'")
    for name, grid in (("nbar_est_grid", nbar_grid),
                       ("A_p_over_2pi_MHz_grid", amplitude_grid)):
        if not grid:
            continue
        if min(grid) < 0:
            problems.append("'{}' must be non-negative".format(name))
        if not _strictly_increasing(list(grid)):
            problems.append("'{}' must be strictly increasing".format(name))
    if (cfg.get("omega_p_over_2pi_GHz") == cfg.get("omega_a_over_2pi_GHz")):
        problems.append("pump frequency equals the oscillator frequency")

    fl = cfg.get("floquet", {})
    if fl.get("method") not in floquet.METHODS:
        problems.append("'floquet.method' must be one of {}".format(
            ", ".join(floquet.METHODS)))
    n_samples = int(fl.get("n_samples", 0))
    if n_samples < 64 or n_samples & (n_samples - 1):
        problems.append("'floquet.n_samples' must be a power of two >= 64")
    elif fl.get("sidebands", 0) > n_samples // 2 - 1:
        problems.append("'floquet.sidebands' must be below n_samples / 2")
    if fl.get("steps_per_period", 0) < 32:
        problems.append("'floquet.steps_per_period' must be >= 32")

    tr = cfg.get("truncation", {})
    for key in ("n_charge_max", "n_fock", "n_fock_b", "n_fock_a",
                "n_phys_b", "n_phys_a"):
        if int(tr.get(key, 0)) < (1 if key == "n_charge_max" else 2):
            problems.append("'truncation.{}' is too small".format(key))
    if (tr.get("n_phys_b", 0) < tr.get("n_fock_b", 0)
            or tr.get("n_phys_a", 0) < tr.get("n_fock_a", 0)):
        problems.append("physical dims must hold the frame truncation")
    if not isinstance(tr.get("check", False), bool):
        problems.append("'truncation.check' must be true or false")

    st = cfg.get("studies", {})
    if not st.get("ng_values"):
        problems.append("'studies.ng_values' must not be empty")
    ratios = st.get("ratio_values") or []
    if not ratios or min(ratios) <= 0:
        problems.append("'studies.ratio_values' must be positive")
    if st.get("sum_EJ_EL_over_h_GHz", 0) <= 0:
        problems.append("'studies.sum_EJ_EL_over_h_GHz' must be positive")

    if cfg.get("workers", 1) < 1:
        problems.append("'workers' must be at least 1")

    if problems:
        raise ValidationError({"constraints": problems})
    return cfg


def validate_ratio_study(cfg):
    '''the shunted E_J + E_L must equal the study's fixed sum'''
    problems = []
    if cfg.model != circuits.SHUNTED:
        problems.append("ratio study needs the shunted model")
    total = cfg.studies.sum_EJ_EL_over_h_GHz
    actual = cfg.EJ_over_h_GHz + (cfg.get("EL_over_h_GHz") or 0.0)
    if abs(actual - total) > SUM_TOL * total:
        problems.append(
            "EJ_over_h_GHz + EL_over_h_GHz = {:.6g} differs from "
            "sum_EJ_EL_over_h_GHz = {:.6g}".format(actual, total)
        )
    if problems:
        raise ValidationError({"constraints": problems})


def ratio_energies(total_GHz, ratio):
    '''(E_J, E_L) in GHz with E_L / E_J = ratio and E_J + E_L = total'''
    E_J = total_GHz / (1.0 + ratio)
    return E_J, total_GHz - E_J


# ----------------------------------------------------------------------------
# conversions to the numerical records
# ----------------------------------------------------------------------------

def circuit_params(cfg, A_p=0.0):
    '''parameter record in rad/s at pump amplitude A_p (rad/s)'''
    common = dict(
        E_C=TWO_PI * cfg.EC_over_h_MHz * MHZ,
        E_J=TWO_PI * cfg.EJ_over_h_GHz * GHZ,
        g=TWO_PI * cfg.g_over_2pi_MHz * MHZ,
        omega_a=TWO_PI * cfg.omega_a_over_2pi_GHz * GHZ,
        omega_p=TWO_PI * cfg.omega_p_over_2pi_GHz * GHZ,
        A_p=A_p,
    )
    if cfg.model == circuits.UNSHUNTED:
        return circuits.UnshuntedParams(N_g=cfg.get("N_g", 0.0), **common)
    return circuits.ShuntedParams(
        E_L=TWO_PI * cfg.EL_over_h_GHz * GHZ, **common
    )


def pump_grid(cfg):
    '''[(nbar_est, A_p in rad/s)] along the configured axis'''
    omega_a = TWO_PI * cfg.omega_a_over_2pi_GHz * GHZ
    omega_p = TWO_PI * cfg.omega_p_over_2pi_GHz * GHZ
    if cfg.get("nbar_est_grid"):
        return [
            (float(nbar),
             circuits.pump_amplitude_for_nbar(nbar, omega_a, omega_p))
            for nbar in cfg.nbar_est_grid
        ]
    points = []
    for amplitude in cfg.A_p_over_2pi_MHz_grid:
        A_p = TWO_PI * amplitude * MHZ
        points.append((circuits.nbar_estimate(A_p, omega_a, omega_p), A_p))
    return points


def frame_basis(cfg, truncation=None):
    tr = truncation or cfg.truncation
    if cfg.model == circuits.UNSHUNTED:
        return BasisSpec.charge_fock(int(tr.n_charge_max), int(tr.n_fock))
    return circuits.shunted_frame_basis(int(tr.n_fock_b), int(tr.n_fock_a))


def propagator_options(cfg):
    return floquet.PropagatorOptions(
        steps_per_period=cfg.floquet.steps_per_period,
        method=cfg.floquet.method,
    )


def noise_model(cfg):
    return dissipator.NoiseModel.from_linewidth(
        TWO_PI * cfg.kappa_over_2pi_kHz * KHZ,
        temperature=cfg.get("temperature_K") or 0.0,
    )
