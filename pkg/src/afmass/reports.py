"""Report serialization: JSON documents and CSV tables.

Every JSON report written by the command-line tool carries the package
version, a timestamp, and the full echoed run configuration; two runs with
the same configuration produce identical documents apart from the
timestamp field.  CSV output uses '.' decimal points regardless of locale.
"""

import csv
import datetime
import json

from .mass import MassEstimate
from .sequences import ExperimentReport
from .spheres import SphereReport
from .weighted import DefectReport

__all__ = [
    "package_version",
    "write_json_report",
    "read_json",
    "write_csv",
    "read_csv",
    "mass_estimate_to_json",
    "mass_estimate_from_json",
    "experiment_report_to_json",
    "experiment_report_from_json",
    "defect_report_to_json",
    "defect_report_from_json",
    "sphere_report_csv_rows",
    "strip_volatile",
]

VOLATILE_FIELDS = ("timestamp",)


def package_version():
    try:
        from importlib.metadata import version

        return version("afmass")
    except Exception:
        return "0.0.0"


def write_json_report(path, payload, config=None):
    """Write a JSON report wrapped with version/config/timestamp metadata."""
    doc = {
        "version": package_version(),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": config,
        "result": payload,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def strip_volatile(doc):
    """Copy of a report document without run-dependent fields."""
    return {k: v for k, v in doc.items() if k not in VOLATILE_FIELDS}


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def _format_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    return rows[0], rows[1:]


def mass_estimate_to_json(est):
    return est.to_json()


def mass_estimate_from_json(obj):
    return MassEstimate.from_json(obj)


def experiment_report_to_json(rep):
    return rep.to_json()


def experiment_report_from_json(obj):
    return ExperimentReport(
        label=obj["label"],
        kind=obj["kind"],
        indices=tuple(obj["indices"]),
        masses=tuple(obj["masses"]),
        limit_mass=float(obj["limit_mass"]),
        distances=tuple(obj["distances"]),
        exponent=float(obj["exponent"]),
        expected_exponent=float(obj["expected_exponent"]),
        verdict=bool(obj["verdict"]),
        drop=float(obj["drop"]),
        details=dict(obj.get("details", {})),
    )


def defect_report_to_json(rep):
    return {"mass": rep.mass, "matter": rep.matter, "defect": rep.defect}


def defect_report_from_json(obj):
    return DefectReport(mass=float(obj["mass"]), matter=float(obj["matter"]))


def sphere_report_csv_rows(reports):
    return SphereReport.csv_columns, [rep.csv_row() for rep in reports]
