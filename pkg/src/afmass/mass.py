"""Total-mass functionals of asymptotically flat metrics.

The principal quantity is the flux integral over large coordinate spheres

    m(r) = c_n int_{S_r} sum_{i,j} (d_i g_ij - d_j g_ii) x^j / r  dA_flat,

with c_n = 1 / (2 (n-1) omega_{n-1}); its r -> infinity limit is the total
mass.  Raw flux values at several radii are extrapolated by fitting
c0 + c1 r^{-p}, where p reflects the decay rate of the metric family.

A second functional compares the area of a sphere with its mean and scalar
curvature extrema,

    fg(S) = 0.5 (|S| / omega_{n-1})^{(n-2)/(n-1)}
                (1 - ((n-2)/(n-1)) max H^2 / min rho),

defined whenever the induced scalar curvature is positive; on centered
coordinate spheres of a Schwarzschild metric it equals the mass exactly,
and for small metric perturbations it converges to the mass as r grows.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import SphereQuadrature, flat_angular_density, sphere_chart, unit_sphere_area
from .metrics import GeometryError, metric_derivatives_at
from .spheres import sphere_report

__all__ = [
    "FitIllConditioned",
    "ZeroRhoMin",
    "MassEstimate",
    "flux_constant",
    "fit_inverse_power",
    "adm_flux",
    "adm_mass",
    "default_mass_radii",
    "fg",
    "fg_detail",
    "fg_limit",
    "penrose_like_check",
]


class FitIllConditioned(GeometryError):
    """Radial extrapolation has too few or too close sample radii."""


class ZeroRhoMin(GeometryError):
    """fg undefined: the minimal induced scalar curvature is not positive."""


def flux_constant(n):
    """Normalization 1 / (2 (n-1) omega_{n-1}) of the mass flux integral."""
    return 1.0 / (2.0 * (n - 1) * unit_sphere_area(n))


@dataclass(frozen=True)
class MassEstimate:
    """Extrapolated mass with the raw flux samples behind it."""

    value: float
    error: float
    radii: tuple = ()
    raw: tuple = ()
    model: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "value": self.value,
            "error": self.error,
            "radii": list(self.radii),
            "raw": list(self.raw),
            "model": dict(self.model),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            value=float(obj["value"]),
            error=float(obj["error"]),
            radii=tuple(float(r) for r in obj["radii"]),
            raw=tuple(float(v) for v in obj["raw"]),
            model={k: float(v) for k, v in obj["model"].items()},
        )


def fit_inverse_power(radii, values, p):
    """Least-squares fit of values ~ c0 + c1 r^{-p}; returns (c0, c1, rms).

    With a single sample the value itself is returned (c1 = 0)."""
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.size == 0:
        raise FitIllConditioned("no sample radii")
    if radii.size == 1:
        return float(values[0]), 0.0, 0.0
    A = np.stack([np.ones_like(radii), radii ** (-p)], axis=1)
    if np.linalg.matrix_rank(A) < 2:
        raise FitIllConditioned("sample radii do not separate the fit basis")
    coef, *_ = np.linalg.lstsq(A, values, rcond=None)
    resid = A @ coef - values
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return float(coef[0]), float(coef[1]), rms


def adm_flux(spec, r, q=32):
    """Raw mass flux through S_r (no extrapolation)."""
    n = spec.n
    quad = SphereQuadrature(n, q)
    if spec.family.rotationally_symmetric:
        phi = quad.generic_node()[None, :]
        u = sphere_chart(phi)
        dg = metric_derivatives_at(spec, r * u, order=1)
        val = _flux_integrand(dg, u)
        return flux_constant(n) * float(val[0]) * unit_sphere_area(n) * r ** (n - 1)
    total = 0.0
    for phi, w in quad.blocks():
        u = sphere_chart(phi)
        dg = metric_derivatives_at(spec, r * u, order=1)
        dens = flat_angular_density(phi) * r ** (n - 1)
        total += float(np.dot(w, _flux_integrand(dg, u) * dens))
    return flux_constant(n) * total


def _flux_integrand(dg, u):
    # sum_ij (d_i g_ij - d_j g_ii) u^j
    return np.einsum("niij,nj->n", dg, u) - np.einsum("njii,nj->n", dg, u)


def default_mass_radii(base_radius, count=4):
    """Geometric ladder base, 2*base, ... used for extrapolation."""
    return tuple(base_radius * 2.0 ** k for k in range(count))


def _decay_exponent(spec):
    p = spec.n - 2
    fam_p = getattr(spec.family, "flux_decay_order", None)
    if fam_p is not None:
        p = min(p, fam_p)
    return max(p, 1)


def adm_mass(spec, radii=None, q=32, p=None):
    """Total mass: flux at several radii, extrapolated to r = infinity."""
    if radii is None:
        radii = default_mass_radii(50.0 * 2.0 ** max(0, 5 - spec.n))
    radii = tuple(float(r) for r in radii)
    raw = tuple(adm_flux(spec, r, q=q) for r in radii)
    if p is None:
        p = _decay_exponent(spec)
    c0, c1, rms = fit_inverse_power(radii, raw, p)
    error = abs(raw[-1] - c0) + rms
    return MassEstimate(
        value=c0, error=error, radii=radii, raw=raw,
        model={"c0": c0, "c1": c1, "p": float(p)},
    )


def fg(spec, r, q=32, method="auto"):
    """Quasi-local mass-type quantity of the coordinate sphere S_r."""
    return fg_detail(spec, r, q=q, method=method)["fg"]


def fg_detail(spec, r, q=32, method="auto", report=None):
    """fg(S_r) together with the sphere data entering it.

    Raises ZeroRhoMin when the minimal induced scalar curvature is <= 0;
    that happens only outside the regime where the functional is meaningful.
    """
    n = spec.n
    if n < 3:
        raise GeometryError("fg needs ambient dimension >= 3")
    if report is None:
        report = sphere_report(spec, r, q=q, method=method)
    if report.rho_min <= 0.0:
        raise ZeroRhoMin(f"min induced scalar curvature {report.rho_min} <= 0 at r={r}")
    ratio = (n - 2.0) / (n - 1.0)
    profile = spec.family.radial_profile
    if method == "auto" and profile is not None:
        # closed conformal forms give maxH2/rho_min = (1 + s)^2 with
        # s = 2 r U'/((n-2) U); expanding 1 - (1+s)^2 avoids the large-r
        # cancellation that otherwise grows like eps * r^{n-2}
        u = float(profile.u(np.array([r]))[0])
        du = float(profile.du(np.array([r]))[0])
        s = 2.0 * r * du / ((n - 2.0) * u)
        bracket = -s * (2.0 + s)
    else:
        bracket = 1.0 - ratio * report.maxH2 / report.rho_min
    value = 0.5 * (report.area / unit_sphere_area(n)) ** ratio * bracket
    return {
        "fg": value,
        "r": float(r),
        "area": report.area,
        "maxH2": report.maxH2,
        "rho_min": report.rho_min,
        "rho_max": report.rho_max,
        "H_min": report.H_min,
        "H_max": report.H_max,
        "q": report.q,
    }


def fg_limit(spec, radii, q=32, method="auto"):
    """Extrapolate fg(S_r) to r = infinity with a c0 + c1/r model."""
    radii = tuple(float(r) for r in radii)
    raw = tuple(fg(spec, r, q=q, method=method) for r in radii)
    c0, c1, rms = fit_inverse_power(radii, raw, 1.0)
    error = abs(raw[-1] - c0) + rms
    return MassEstimate(
        value=c0, error=error, radii=radii, raw=raw,
        model={"c0": c0, "c1": c1, "p": 1.0},
    )


def penrose_like_check(spec, r, q=32, method="auto", mass=None):
    """Check rho_min > ratio * maxH2 and, when it holds, fg(S_r) <= mass.

    mass defaults to the family's exact mass when known, else the flux
    extrapolation.  Returns a record of every quantity involved.
    """
    n = spec.n
    report = sphere_report(spec, r, q=q, method=method)
    ratio = (n - 2.0) / (n - 1.0)
    hypothesis = report.rho_min > ratio * report.maxH2
    if mass is None:
        mass = spec.family.mass_hint
    if mass is None:
        mass = adm_mass(spec, q=q).value
    record = {
        "r": float(r),
        "hypothesis_holds": bool(hypothesis),
        "rho_min": report.rho_min,
        "maxH2": report.maxH2,
        "ratio": ratio,
        "mass": float(mass),
        "fg": None,
        "inequality_holds": None,
    }
    if hypothesis:
        value = fg_detail(spec, r, q=q, method=method, report=report)["fg"]
        record["fg"] = value
        record["inequality_holds"] = bool(value <= mass + 1e-12 * max(1.0, abs(mass)))
    return record
