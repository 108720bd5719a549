"""Command-line entry point.

Usage:

    afmass --config run.json [--out DIR] [--quadrature Q] [--threads K]

The config document selects one command and its inputs:

    {"command": "adm-mass",
     "spec": {"n": 3, "family": "Schwarzschild", "params": {"m": 1.0},
              "derivative_mode": "analytic"},
     "radii": [50, 100, 200, 400],
     "q": 32}

Commands: adm-mass, fg-profile, weighted-mass, sequence, cone-angle,
cone-sequence.  Exit code 2 means the configuration was rejected before any
computation (ConfigInvalid); exit code 1 means the computation itself
failed, in which case an error report JSON is still written.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import cone as cone_mod
from . import sequences as seq_mod
from .mass import adm_mass, fg_detail, fg_limit
from .metrics import GeometryError, metric_from_json
from .reports import package_version, write_csv, write_json_report
from .weighted import mass_matter_defect, mass_via_divergence

__all__ = ["ConfigInvalid", "ComputationFailed", "RunConfig", "run", "main"]

COMMANDS = (
    "adm-mass",
    "fg-profile",
    "weighted-mass",
    "sequence",
    "cone-angle",
    "cone-sequence",
)


class ConfigInvalid(Exception):
    """Configuration rejected before computation.  Exit code 2."""

    exit_code = 2


class ComputationFailed(Exception):
    """A computation raised after a valid configuration.  Exit code 1."""

    exit_code = 1


class RunConfig:
    """Validated run configuration."""

    def __init__(self, raw, out_dir=".", quadrature=None, threads=None):
        if not isinstance(raw, dict):
            raise ConfigInvalid("config document must be a JSON object")
        command = raw.get("command")
        if command not in COMMANDS:
            raise ConfigInvalid(
                f"unknown command {command!r}; expected one of {COMMANDS}"
            )
        self.command = command
        self.raw = raw
        self.out_dir = out_dir
        self.q = int(quadrature if quadrature is not None else raw.get("q", 16))
        if self.q < 2:
            raise ConfigInvalid("quadrature order must be >= 2")
        self.threads = threads
        self.seed = raw.get("seed", 0)

    def echo(self):
        doc = dict(self.raw)
        doc["q"] = self.q
        doc["seed"] = self.seed
        if self.threads is not None:
            doc["threads"] = self.threads
        return doc

    def spec(self):
        if "spec" not in self.raw:
            raise ConfigInvalid("config needs a 'spec' metric document")
        try:
            return metric_from_json(self.raw["spec"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigInvalid(f"invalid metric spec: {exc}") from exc

    def radii(self, default=None, required=True):
        radii = self.raw.get("radii", default)
        if radii is None:
            if required:
                raise ConfigInvalid("config needs a 'radii' list")
            return None
        radii = [float(r) for r in radii]
        if not radii:
            raise ConfigInvalid("radii list must not be empty")
        if sorted(radii) != radii or min(radii) <= 0.0:
            raise ConfigInvalid("radii must be positive and increasing")
        return radii

    def indices(self, default=(1, 2, 4, 8)):
        indices = self.raw.get("indices", list(default))
        if not indices:
            raise ConfigInvalid("indices list must not be empty")
        return [int(i) for i in indices]

    def surface(self):
        alpha = self.raw.get("alpha")
        if alpha is None:
            raise ConfigInvalid("cone commands need an 'alpha' value")
        alpha = float(alpha)
        if not 0.0 < alpha <= 1.0:
            raise ConfigInvalid("alpha must lie in (0, 1]")
        pert = self.raw.get("perturbation")
        if pert:
            return cone_mod.perturbed_cone(
                alpha,
                amplitude=float(pert.get("amplitude", 0.1)),
                tau=float(pert.get("tau", 1.0)),
            )
        return cone_mod.capped_cone(alpha)


def _set_threads(threads):
    if threads is None:
        threads = os.environ.get("AFMASS_THREADS")
    if threads is None:
        return None
    threads = int(threads)
    if threads < 1:
        raise ConfigInvalid("thread count must be >= 1")
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(threads)
    except ImportError:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(threads)
    return threads


def _cmd_adm_mass(cfg):
    spec = cfg.spec()
    radii = cfg.radii(required=False)
    est = adm_mass(spec, radii=radii, q=cfg.q)
    return {"json": {"adm_mass.json": est.to_json()}, "csv": {}}


def _cmd_fg_profile(cfg):
    spec = cfg.spec()
    radii = cfg.radii()
    rows = []
    values = []
    for r in radii:
        detail = fg_detail(spec, r, q=cfg.q)
        ratio = (spec.n - 2.0) / (spec.n - 1.0)
        hypothesis = detail["rho_min"] > ratio * detail["maxH2"]
        rows.append(
            [r, detail["fg"], detail["area"], detail["maxH2"],
             detail["rho_min"], hypothesis]
        )
        values.append(detail["fg"])
    est = fg_limit(spec, radii, q=cfg.q)
    return {
        "json": {"fg_limit.json": est.to_json()},
        "csv": {
            "fg_profile.csv": (
                ("r", "fg", "area", "maxH2", "rho_min", "hypothesis_holds"),
                rows,
            )
        },
    }


def _cmd_weighted_mass(cfg):
    from .reports import defect_report_to_json
    from .shells import shell_metric

    out_json = {}
    out_csv = {}
    if "indices" in cfg.raw:
        n = int(cfg.raw.get("n", 3))
        rows = []
        for i in cfg.indices():
            spec_i = shell_metric(n, i)
            rep = mass_matter_defect(spec_i, q=cfg.q)
            rows.append([i, rep.mass, rep.matter, rep.defect])
        out_csv["shell_defects.csv"] = (("i", "mass", "matter", "defect"), rows)
        out_json["defect_report.json"] = {
            "n": n,
            "rows": [
                {"i": r[0], "mass": r[1], "matter": r[2], "defect": r[3]}
                for r in rows
            ],
        }
    else:
        spec = cfg.spec()
        rep = mass_matter_defect(spec, q=cfg.q)
        doc = defect_report_to_json(rep)
        div = mass_via_divergence(spec, q=cfg.q)
        doc["mass_via_divergence"] = div.to_json()
        out_json["defect_report.json"] = doc
    return {"json": out_json, "csv": out_csv}


def _cmd_sequence(cfg):
    kind = cfg.raw.get("kind")
    if kind not in seq_mod.EXPERIMENT_KINDS:
        raise ConfigInvalid(
            f"sequence kind must be one of {seq_mod.EXPERIMENT_KINDS}"
        )
    n = int(cfg.raw.get("n", 3))
    kw = {}
    if "window_L" in cfg.raw:
        kw["half_width"] = float(cfg.raw["window_L"])
    if "resolution" in cfg.raw:
        kw["grid_q"] = int(cfg.raw["resolution"])
    rep = seq_mod.run_semicontinuity_experiment(
        kind, n=n, indices=cfg.indices(default=(2, 4, 8, 16)), q=cfg.q, **kw
    )
    return {
        "json": {"experiment.json": rep.to_json()},
        "csv": {"experiment.csv": (rep.csv_columns, rep.csv_rows())},
    }


def _cmd_cone_angle(cfg):
    surface = cfg.surface()
    radii = cfg.radii(default=[4.0, 8.0, 16.0, 32.0], required=False)
    est = cone_mod.cone_mass(surface, radii=tuple(radii))
    return {"json": {"cone_mass.json": est.to_json()}, "csv": {}}


def _cmd_cone_sequence(cfg):
    kind = cfg.raw.get("kind", "blow_up")
    if kind not in cone_mod.CONE_EXPERIMENT_KINDS:
        raise ConfigInvalid(
            f"cone sequence kind must be one of {cone_mod.CONE_EXPERIMENT_KINDS}"
        )
    alpha = float(cfg.raw.get("alpha", 0.7))
    if not 0.0 < alpha <= 1.0:
        raise ConfigInvalid("alpha must lie in (0, 1]")
    rep = cone_mod.cone_semicontinuity_experiment(
        kind, alpha=alpha, indices=cfg.indices(default=(4, 8, 16, 32))
    )
    return {
        "json": {"experiment.json": rep.to_json()},
        "csv": {"experiment.csv": (rep.csv_columns, rep.csv_rows())},
    }


_DISPATCH = {
    "adm-mass": _cmd_adm_mass,
    "fg-profile": _cmd_fg_profile,
    "weighted-mass": _cmd_weighted_mass,
    "sequence": _cmd_sequence,
    "cone-angle": _cmd_cone_angle,
    "cone-sequence": _cmd_cone_sequence,
}


def run(cfg):
    """Execute a validated RunConfig; writes reports into cfg.out_dir.

    Returns the list of written paths.  Raises ComputationFailed (after
    writing an error report) if the computation errors out."""
    np.random.seed(cfg.seed)
    os.makedirs(cfg.out_dir, exist_ok=True)
    try:
        outputs = _DISPATCH[cfg.command](cfg)
    except ConfigInvalid:
        raise
    except (GeometryError, FloatingPointError, np.linalg.LinAlgError, ValueError) as exc:
        error_doc = {"error": type(exc).__name__, "message": str(exc)}
        path = os.path.join(cfg.out_dir, "error.json")
        write_json_report(path, error_doc, config=cfg.echo())
        raise ComputationFailed(f"{type(exc).__name__}: {exc}") from exc
    written = []
    for name, payload in outputs["json"].items():
        path = os.path.join(cfg.out_dir, name)
        write_json_report(path, payload, config=cfg.echo())
        written.append(path)
    for name, (columns, rows) in outputs["csv"].items():
        path = os.path.join(cfg.out_dir, name)
        write_csv(path, columns, rows)
        written.append(path)
    return written


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="afmass",
        description="Mass functionals of asymptotically flat metrics",
    )
    parser.add_argument("--config", required=True, help="run config JSON path")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--quadrature", type=int, default=None,
                        help="override angular quadrature order")
    parser.add_argument("--threads", type=int, default=None,
                        help="thread cap (fallback: AFMASS_THREADS)")
    parser.add_argument("--version", action="version", version=package_version())
    args = parser.parse_args(argv)

    try:
        threads = _set_threads(args.threads)
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"malformed config JSON: {exc}") from exc
        cfg = RunConfig(raw, out_dir=args.out, quadrature=args.quadrature,
                        threads=threads)
        written = run(cfg)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ComputationFailed as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
