'''File helpers for sweep outputs
'''

import csv
import json
import logging
import os

import numpy as np


def create_filepath(dir_path, name, tag, format):
    '''Creates a filepath from a base name, an optional tag and a format'''

    tag_suffix = "-" + str(tag) if tag not in (None, "") else ""
    return os.path.join(
        dir_path,
        "{0}{1}.{2}".format(name, tag_suffix, format.lower())
    )


def create_dir(dir_path):
    '''Creates a directory (and parents) if it does not exist yet'''
    if not os.path.isdir(dir_path):
        os.makedirs(dir_path)
    return dir_path


def append_to_output(output, kind, tag, output_filepath):
    '''Sorts a written file into the dict returned by an action'''

    output[
        str(kind) + ("-" + str(tag) if tag not in (None, "") else "")
    ] = output_filepath

    return output


def to_plain(value):
    '''numpy scalars and arrays to JSON-compatible python values'''
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex):
        return {"real": value.real, "imag": value.imag}
    return value


def write_to_csv(output_filepath, fieldnames, rows):
    '''Writes rows (dicts) into a CSV file; missing fields stay empty'''

    with open(output_filepath, "w") as f:
        writer = csv.DictWriter(f, fieldnames, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({
                key: ("" if row.get(key) is None else to_plain(row.get(key)))
                for key in fieldnames
            })
    logging.debug("[jjcircuits-floquetmarkov] wrote " + output_filepath)
    return output_filepath


def write_to_json(output_filepath, content):
    '''Writes one JSON document with sorted keys'''
    with open(output_filepath, "w") as jsonfile:
        json.dump(to_plain(content), jsonfile, indent=2, sort_keys=True)
        jsonfile.write("\n")
    logging.debug("[jjcircuits-floquetmarkov] wrote " + output_filepath)
    return output_filepath


def read_json(filepath):
    with open(filepath, "r") as jsonfile:
        return json.load(jsonfile)
