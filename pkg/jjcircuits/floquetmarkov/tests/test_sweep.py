"""
Test module for pump sweeps, per-point reports and the studies
"""

import json
import os

import numpy as np
import pytest

from jjcircuits.floquetmarkov import config, sweep
from jjcircuits.floquetmarkov.errors import (
    IntegrationError,
    ValidationError,
)

# small enough to solve a handful of points in a few seconds
TINY = {
    "truncation": {"n_charge_max": 4, "n_fock": 3},
    "nbar_est_grid": [0, 1],
    "floquet": {"steps_per_period": 64, "sidebands": 8},
    "observables": {"n_levels": 5},
}


@pytest.fixture
def tiny_config():
    return config.load_config(preset="ci", overrides=TINY)


def test_sweep_reports(tiny_config):
    """test case for one report per grid point"""
    reports, manifest = sweep.run_sweep(tiny_config, workers=1)
    assert [r["index"] for r in reports] == [0, 1]
    assert manifest["points"] == 2
    assert manifest["failed"] == []
    for report in reports:
        assert report["error"] is None
        assert 0.0 <= report["impurity"] <= 1.0
        assert sum(report["populations"]) == pytest.approx(
            1.0 - report["leakage"])
        assert isinstance(report["flagged"], bool)
        assert set(report["flags"]) == {
            "degenerate", "non_unique", "leakage", "fourier_tail",
            "diagnostic_unconverged",
        }
        assert len(report["quasi_energies_Hz"]) == 27
        assert sorted(report["branch_order"]) == list(range(27))
    assert reports[0]["xi"] == 0.0
    # the report is plain JSON
    json.dumps(reports)


def test_pool_and_serial_agree(tiny_config):
    """test case for a process pool giving the serial results"""
    serial, _ = sweep.run_sweep(tiny_config, workers=1)
    pooled, _ = sweep.run_sweep(tiny_config, workers=2)
    for first, second in zip(serial, pooled):
        assert first["index"] == second["index"]
        np.testing.assert_allclose(first["populations"],
                                   second["populations"], atol=1e-9)
        assert first["impurity"] == pytest.approx(second["impurity"],
                                                  abs=1e-9)


def test_failed_point_is_recorded(tiny_config, monkeypatch):
    """test case for a point error that does not stop the sweep"""
    def fail(cfg, params, basis=None, noise=None):
        raise IntegrationError("propagator lost unitarity", drift=1.0)

    monkeypatch.setattr(sweep, "solve_point", fail)
    reports, manifest = sweep.run_sweep(tiny_config, workers=1)
    assert manifest["failed"] == [0, 1]
    assert reports[0]["error"].startswith("IntegrationError")
    assert reports[0]["flagged"] is False


def test_written_sweep(tiny_config, tmp_path):
    """test case for the files of a written sweep"""
    out_dir = str(tmp_path)
    reports, manifest = sweep.run_sweep(tiny_config, workers=1,
                                        out_dir=out_dir)
    files = manifest["files"]
    assert set(files) == {"points", "csv-sweep", "csv-stark_lines",
                          "json-config", "json-manifest"}
    assert sorted(os.listdir(files["points"])) == ["point-000.json",
                                                   "point-001.json"]
    with open(files["csv-sweep"]) as f:
        header = f.readline().strip().split(",")
    assert header == sweep.SUMMARY_FIELDS
    with open(files["json-manifest"]) as f:
        written = json.load(f)
    assert written["package"] == "jjcircuits-floquetmarkov"
    assert written["points"] == 2
    reloaded = config.load_config(files["json-config"], preset="ci")
    assert reloaded.truncation.n_charge_max == 4


def test_line_rows():
    """test case for flattening Stark lines across reports"""
    reports = [
        {"index": 0, "nbar_est": 0.0, "stark_lines": [
            {"frequency": 1.0, "weight": 0.5}]},
        {"index": 1, "nbar_est": 5.0, "stark_lines": None},
    ]
    assert sweep.line_rows(reports) == [
        {"frequency": 1.0, "weight": 0.5, "index": 0, "nbar_est": 0.0}]


def test_track_branches_follows_modes():
    """test case for quasi-energies reordered along swapped modes"""
    first = ({"quasi_energies_Hz": [1.0, 2.0]}, np.eye(2))
    second = ({"quasi_energies_Hz": [2.0, 1.0]}, np.eye(2)[:, ::-1])
    sweep.track_branches([first, second])
    assert first[0]["quasi_energies_Hz"] == [1.0, 2.0]
    assert second[0]["quasi_energies_Hz"] == [1.0, 2.0]
    assert second[0]["branch_overlap_min"] == pytest.approx(1.0)


def test_ng_study_needs_unshunted_model():
    """test case for the offset-charge study on the wrong circuit"""
    cfg = config.load_config(preset="ci", overrides={
        "model": "shunted", "EJ_over_h_GHz": 6.0, "EL_over_h_GHz": 14.0,
    })
    with pytest.raises(ValidationError):
        sweep.run_ng_study(cfg)


def test_ratio_study_needs_shunted_model(tiny_config):
    """test case for the E_L / E_J study on the wrong circuit"""
    with pytest.raises(ValidationError):
        sweep.run_ratio_study(tiny_config)


def test_ng_study_writes_one_sweep_per_offset(tiny_config, tmp_path):
    """test case for the offset-charge study output layout"""
    tiny_config.studies.ng_values = [0.0, 0.5]
    studies = sweep.run_ng_study(tiny_config, workers=1,
                                 out_dir=str(tmp_path))
    assert sorted(studies) == [0.0, 0.5]
    assert all(r["N_g"] == 0.5 for r in studies[0.5])
    assert os.path.isdir(str(tmp_path / "ng-0.5" / "points"))


def test_bumped_truncation(tiny_config):
    """test case for the one-step-larger truncation"""
    bumped = sweep.bumped_truncation(tiny_config)
    assert bumped.truncation.n_charge_max == 5
    assert bumped.truncation.n_fock == 4
    assert bumped.truncation.n_phys_a >= bumped.truncation.n_fock_a
    assert tiny_config.truncation.n_charge_max == 4


def test_truncation_check_adds_a_flag(tiny_config):
    """test case for the re-solve at a larger truncation"""
    tiny_config.truncation.check = True
    reports, _ = sweep.run_sweep(tiny_config, workers=1)
    for report in reports:
        assert report["error"] is None
        assert "truncation_unconverged" in report["flags"]
        assert 0.0 <= report["truncation_population_change"] <= 1.0


def test_unconverged_truncation_flags_the_point(tiny_config, monkeypatch):
    """test case for a population change above tolerance"""
    tiny_config.truncation.check = True
    monkeypatch.setattr(sweep, "truncation_check",
                        lambda cfg, params, report: (0.5, None))
    reports, manifest = sweep.run_sweep(tiny_config, workers=1)
    assert all(r["flags"]["truncation_unconverged"] for r in reports)
    assert manifest["flagged"] == [0, 1]
