"""
Test module for the output file helpers
"""

import filecmp
import os

import numpy as np
import pytest

import jjcircuits.floquetmarkov.utils as utils

# Define fixed variables
test_dir_path = os.path.dirname(os.path.realpath(__file__)) + "/correct_files"

# Define fixtures


@pytest.fixture
def test_table_filepath(tmp_path):
    filepath = str(tmp_path / "test_table.csv")
    rows = [
        {"name": "a", "value": 0.5, "flag": True, "empty": None},
        {"name": "b", "value": np.float64(2.0), "flag": np.bool_(False),
         "ignored": "x"},
    ]
    return utils.write_to_csv(filepath, ["name", "value", "flag", "empty"],
                              rows)


@pytest.fixture
def test_record_filepath(tmp_path):
    filepath = str(tmp_path / "test_record.json")
    content = {
        "name": "point",
        "values": np.arange(3),
        "impurity": np.float64(0.25),
        "ok": np.bool_(True),
        "amplitude": 1 + 2j,
    }
    return utils.write_to_json(filepath, content)


# Run tests


def test_write_to_csv(test_table_filepath):
    """test case for writing rows with missing and extra fields"""
    assert filecmp.cmp(test_table_filepath,
                       test_dir_path + "/correct_table.csv", shallow=False)


def test_write_to_json(test_record_filepath):
    """test case for writing numpy values as sorted JSON"""
    assert filecmp.cmp(test_record_filepath,
                       test_dir_path + "/correct_record.json", shallow=False)
    assert utils.read_json(test_record_filepath)["values"] == [0, 1, 2]


def test_create_filepath():
    """test case for file names with and without a tag"""
    assert utils.create_filepath("/tmp/out", "sweep", None, "CSV") == \
        "/tmp/out/sweep.csv"
    assert utils.create_filepath("/tmp/out", "point", "007", "json") == \
        "/tmp/out/point-007.json"


def test_create_dir(tmp_path):
    """test case for nested directory creation"""
    target = str(tmp_path / "a" / "b")
    assert utils.create_dir(target) == target
    assert os.path.isdir(target)
    # existing directories are left alone
    utils.create_dir(target)


def test_append_to_output():
    """test case for keys of the action output dict"""
    output = {}
    utils.append_to_output(output, "csv", "fig1", "/tmp/fig1.csv")
    utils.append_to_output(output, "manifest", None, "/tmp/manifest.json")
    assert output == {"csv-fig1": "/tmp/fig1.csv",
                      "manifest": "/tmp/manifest.json"}


def test_to_plain():
    """test case for nested numpy containers"""
    plain = utils.to_plain({
        1: (np.int64(3), np.array([0.5, 1.5])),
        "z": np.complex128(1j),
    })
    assert plain == {"1": [3, [0.5, 1.5]], "z": {"real": 0.0, "imag": 1.0}}
    assert type(plain["1"][0]) is int
