"""
Test module for preset loading, overrides and config validation
"""

import json

import numpy as np
import pytest

from jjcircuits.floquetmarkov import circuits, config
from jjcircuits.floquetmarkov.errors import ValidationError

TWO_PI = 2 * np.pi


def test_paper_preset_loads():
    """test case for the packaged default preset"""
    cfg = config.load_config()
    assert cfg.model == circuits.UNSHUNTED
    assert cfg.preset == "paper"
    assert cfg.floquet.n_samples & (cfg.floquet.n_samples - 1) == 0


def test_overrides_are_merged():
    """test case for nested overrides over a preset"""
    cfg = config.load_config(preset="ci", overrides={
        "truncation": {"n_fock": 5}, "N_g": 0.25,
    })
    assert cfg.truncation.n_fock == 5
    assert cfg.truncation.n_charge_max == 15
    assert cfg.N_g == 0.25


def test_config_file_layer(tmp_path):
    """test case for a config file between preset and overrides"""
    path = tmp_path / "shunted.json"
    path.write_text(json.dumps({
        "model": "shunted", "EJ_over_h_GHz": 6.0, "EL_over_h_GHz": 14.0,
        "A_p_over_2pi_MHz_grid": [0.0, 25.0, 50.0],
    }))
    cfg = config.load_config(str(path), preset="ci",
                             overrides={"EJ_over_h_GHz": 7.0})
    assert cfg.model == circuits.SHUNTED
    assert cfg.EJ_over_h_GHz == 7.0
    # naming the amplitude axis drops the preset's nbar axis
    assert cfg.nbar_est_grid is None
    assert [A for _, A in config.pump_grid(cfg)] == pytest.approx(
        [0.0, TWO_PI * 25e6, TWO_PI * 50e6])


def test_unknown_preset():
    """test case for a preset name outside the packaged ones"""
    with pytest.raises(ValidationError):
        config.load_config(preset="nightly")


def test_unreadable_config(tmp_path):
    """test case for missing and malformed config files"""
    with pytest.raises(ValidationError):
        config.load_config(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{model: shunted")
    with pytest.raises(ValidationError):
        config.load_config(str(broken))


def test_both_pump_axes_in_one_layer():
    """test case for a layer naming nbar and amplitude grids at once"""
    with pytest.raises(ValidationError) as error:
        config.load_config(preset="ci", overrides={
            "nbar_est_grid": [0, 10], "A_p_over_2pi_MHz_grid": [0, 10],
        })
    assert "exactly one" in str(error.value)


@pytest.mark.parametrize("overrides", [
    {"floquet": {"n_samples": 48}},
    {"floquet": {"sidebands": 40}},
    {"floquet": {"steps_per_period": 16}},
    {"floquet": {"method": "rk4"}},
    {"nbar_est_grid": [0, 50, 20]},
    {"model": "fluxonium"},
    {"model": "shunted"},
    {"workers": 0},
    {"omega_p_over_2pi_GHz": 5.5},
    {"temperature_K": "warm"},
    {"temperature_K": -1.0},
    {"truncation": {"check": "yes"}},
])
def test_invalid_configs(overrides):
    """test case for rejected config values"""
    with pytest.raises(ValidationError):
        config.load_config(preset="ci", overrides=overrides)


def test_null_temperature_means_a_cold_bath():
    """test case for temperature_K given as null"""
    cfg = config.load_config(preset="ci", overrides={"temperature_K": None})
    assert config.noise_model(cfg).temperature == 0.0


def test_dump_and_reload(tmp_path):
    """test case for writing a resolved config back to JSON"""
    cfg = config.load_config(preset="ci")
    path = config.dump_config(cfg, str(tmp_path / "config.json"))
    reloaded = config.load_config(path, preset="ci")
    assert reloaded == cfg


def test_ratio_energies():
    """test case for E_J, E_L at a fixed sum and ratio"""
    E_J, E_L = config.ratio_energies(6.66, 2.0)
    assert E_J == pytest.approx(2.22)
    assert E_L == pytest.approx(4.44)


def test_ratio_study_needs_matching_sum():
    """test case for the fixed E_J + E_L of the ratio study"""
    cfg = config.load_config(preset="ci", overrides={
        "model": "shunted", "EJ_over_h_GHz": 2.22, "EL_over_h_GHz": 4.44,
    })
    config.validate_ratio_study(cfg)
    cfg.EL_over_h_GHz = 5.0
    with pytest.raises(ValidationError):
        config.validate_ratio_study(cfg)


def test_circuit_params_are_angular():
    """test case for the conversion of named units to rad/s"""
    cfg = config.load_config(preset="ci", overrides={"N_g": 0.5})
    params = config.circuit_params(cfg, A_p=1.0)
    assert isinstance(params, circuits.UnshuntedParams)
    assert params.E_C == pytest.approx(TWO_PI * 150e6)
    assert params.E_J == pytest.approx(TWO_PI * 20e9)
    assert params.omega_p == pytest.approx(TWO_PI * 6e9)
    assert params.N_g == 0.5
    assert params.A_p == 1.0


def test_nbar_pump_grid():
    """test case for the nbar axis of the pump grid"""
    cfg = config.load_config(preset="ci")
    grid = config.pump_grid(cfg)
    assert [nbar for nbar, _ in grid] == [0, 50, 150, 300, 500]
    omega_a, omega_p = TWO_PI * 5.5e9, TWO_PI * 6e9
    for nbar, A_p in grid:
        assert circuits.nbar_estimate(A_p, omega_a, omega_p) == \
            pytest.approx(nbar, abs=1e-9)


def test_frame_basis_per_model():
    """test case for the truncated basis of each model"""
    cfg = config.load_config(preset="ci")
    assert config.frame_basis(cfg).mode_dims == (31, 8)
    shunted = config.load_config(preset="ci", overrides={
        "model": "shunted", "EL_over_h_GHz": 14.0, "EJ_over_h_GHz": 6.0,
    })
    assert config.frame_basis(shunted).mode_dims == (12, 6)
