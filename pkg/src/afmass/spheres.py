"""Geometry of coordinate spheres S_r = {|x| = r}.

Two evaluation routes coexist on purpose:

* a generic route valid for every metric family: the induced metric is the
  chart pullback, the mean curvature is the covariant divergence of the
  outward unit normal of {|x| = r}, and the intrinsic scalar curvature is
  computed by finite differences of the pulled-back metric in the angles;

* closed conformal formulas for metrics U^{4/(n-2)} delta with U radial
  (constant on each sphere), used as the default for those families and as
  the independent oracle for the generic route in the test suite.
"""

import math
from dataclasses import dataclass

import numpy as np

from .curvature import curvature_of_metric_fn
from .geometry import (
    SphereQuadrature,
    flat_angular_density,
    sphere_chart,
    sphere_chart_jacobian,
    unit_sphere_area,
)
from .metrics import (
    EPS,
    GeometryError,
    metric_at,
    metric_derivatives_at,
)

__all__ = [
    "PoleEvaluation",
    "DegenerateNormal",
    "SphereReport",
    "induced_metric_at",
    "sphere_area",
    "mean_curvature_at",
    "intrinsic_scalar_curvature_at",
    "sphere_report",
    "conformal_mean_curvature",
    "conformal_sphere_scalar_curvature",
    "conformal_sphere_area",
]

POLE_GUARD = 1e-9


class PoleEvaluation(GeometryError):
    """Angle too close to a coordinate pole of the spherical chart."""


class DegenerateNormal(GeometryError):
    pass


@dataclass(frozen=True)
class SphereReport:
    """Area, mean-curvature and induced-scalar-curvature extrema of S_r."""

    r: float
    area: float
    H_min: float
    H_max: float
    maxH2: float
    rho_min: float
    rho_max: float
    q: int

    def csv_row(self):
        return [
            self.r, self.area, self.H_min, self.H_max,
            self.maxH2, self.rho_min, self.rho_max, self.q,
        ]

    csv_columns = ("r", "area", "H_min", "H_max", "maxH2", "rho_min", "rho_max", "q")


def _as_angles(phi, n):
    phi = np.asarray(phi, dtype=float)
    if phi.ndim == 1:
        if phi.shape[0] != n - 1:
            raise ValueError(f"angles must have dimension {n - 1}")
        return phi[None, :], True
    return phi, False


def _check_poles(phi):
    if phi.shape[1] >= 2 and np.any(np.abs(np.sin(phi[:, :-1])) < POLE_GUARD):
        raise PoleEvaluation("angle within guard distance of a chart pole")


# ---------------------------------------------------------------------------
# closed conformal formulas (radial U, constant on each sphere)


def conformal_sphere_area(n, r, u_value):
    return u_value ** (2.0 * (n - 1) / (n - 2)) * unit_sphere_area(n) * r ** (n - 1)


def conformal_mean_curvature(n, r, u_value, du_value):
    """H = U^{-2/(n-2)} (n-1)/r + (2(n-1)/(n-2)) U^{-n/(n-2)} nu(U)."""
    return (
        u_value ** (-2.0 / (n - 2)) * (n - 1) / r
        + 2.0 * (n - 1) / (n - 2) * u_value ** (-n / (n - 2.0)) * du_value
    )


def conformal_sphere_scalar_curvature(n, r, u_value):
    """Induced scalar curvature of S_r when the conformal factor is constant
    on the sphere: plain rescaling of (n-1)(n-2)/r^2."""
    return u_value ** (-4.0 / (n - 2)) * (n - 1) * (n - 2) / r ** 2


# ---------------------------------------------------------------------------
# generic route


def induced_metric_at(spec, r, phi):
    """Pullback gamma_ab = g(d_a, d_b) on S_r in the spherical chart."""
    n = spec.n
    phi, single = _as_angles(phi, n)
    _check_poles(phi)
    u = sphere_chart(phi)
    J = r * sphere_chart_jacobian(phi)
    g = metric_at(spec, r * u)
    gamma = np.einsum("pka,pkl,plb->pab", J, g, J)
    gamma = 0.5 * (gamma + np.swapaxes(gamma, -1, -2))
    return gamma[0] if single else gamma


def sphere_area(spec, r, q=32, method="auto"):
    """Area of S_r by angular quadrature of sqrt(det gamma)."""
    n = spec.n
    profile = spec.family.radial_profile
    if method == "auto" and profile is not None:
        return conformal_sphere_area(n, r, float(profile.u(np.array([r]))[0]))
    quad = SphereQuadrature(n, q)
    if method == "auto" and spec.family.rotationally_symmetric:
        # integrand / flat density is constant on the sphere
        phi = quad.generic_node()[None, :]
        gamma = induced_metric_at(spec, r, phi)
        ratio = math.sqrt(np.linalg.det(gamma[0])) / (
            r ** (n - 1) * float(flat_angular_density(phi)[0])
        )
        return ratio * unit_sphere_area(n) * r ** (n - 1)

    def integrand(phi):
        gamma = induced_metric_at(spec, r, phi)
        return np.sqrt(np.linalg.det(gamma))

    return quad.integrate(integrand)


def mean_curvature_at(spec, r, phi, method="auto"):
    """Mean curvature of S_r, positive for round spheres in flat space.

    Computed as the covariant divergence of the outward unit normal of the
    level set {|x| = r}; the conformal closed form is used for radial
    conformal families unless method='generic'.
    """
    n = spec.n
    phi, single = _as_angles(phi, n)
    _check_poles(phi)
    profile = spec.family.radial_profile
    if method == "auto" and profile is not None:
        H = conformal_mean_curvature(
            n, r, float(profile.u(np.array([r]))[0]), float(profile.du(np.array([r]))[0])
        )
        out = np.full(phi.shape[0], H)
        return float(out[0]) if single else out
    x = r * sphere_chart(phi)
    g = metric_at(spec, x)
    dg = metric_derivatives_at(spec, x, order=1)
    H = _divergence_of_unit_normal(x, g, dg)
    return float(H[0]) if single else H


def _divergence_of_unit_normal(x, g, dg):
    """div_g(nu) for nu the g-unit normal of {|x| = const}, batched."""
    N, n = x.shape
    r = np.linalg.norm(x, axis=1)
    Nc = x / r[:, None]  # covector d|x|, components x_j / r
    dN = (np.eye(n)[None] / r[:, None, None]
          - np.einsum("ni,nj->nij", x, x) / r[:, None, None] ** 3)  # d_i N_j
    ginv = np.linalg.inv(g)
    dginv = -np.einsum("nja,nkab,nbl->nkjl", ginv, dg, ginv)  # d_k g^{jl}
    lam2 = np.einsum("njk,nj,nk->n", ginv, Nc, Nc)
    if np.any(lam2 <= 0.0):
        raise DegenerateNormal("gradient of |x| is g-null")
    lam = np.sqrt(lam2)
    # d_i lambda
    dlam = (
        np.einsum("nijk,nj,nk->ni", dginv, Nc, Nc)
        + 2.0 * np.einsum("njk,nij,nk->ni", ginv, dN, Nc)
    ) / (2.0 * lam[:, None])
    # nu^i = g^{ij} N_j / lambda
    nu_up = np.einsum("nij,nj->ni", ginv, Nc) / lam[:, None]
    # partial divergence d_i nu^i
    div = (
        np.einsum("niij,nj->n", dginv, Nc) / lam
        + np.einsum("nij,nij->n", ginv, dN) / lam
        - np.einsum("nij,nj,ni->n", ginv, Nc, dlam) / lam2
    )
    # + Gamma^i_{ik} nu^k = d_k log sqrt(det g) nu^k
    dlogdet = 0.5 * np.einsum("nij,nkij->nk", ginv, dg)
    return div + np.einsum("nk,nk->n", dlogdet, nu_up)


def intrinsic_scalar_curvature_at(spec, r, phi, method="auto", fd_step=None):
    """Scalar curvature of (S_r, gamma) at the given angles."""
    n = spec.n
    phi, single = _as_angles(phi, n)
    _check_poles(phi)
    if n == 2:
        out = np.zeros(phi.shape[0])
        return float(out[0]) if single else out
    profile = spec.family.radial_profile
    if method == "auto" and profile is not None:
        rho = conformal_sphere_scalar_curvature(
            n, r, float(profile.u(np.array([r]))[0])
        )
        out = np.full(phi.shape[0], rho)
        return float(out[0]) if single else out
    if fd_step is None:
        # 4th-order stencils: balance truncation h^4 against roundoff eps/h^2
        fd_step = EPS ** (1.0 / 6.0)

    def gamma_fn(angles):
        return induced_metric_at(spec, r, angles) / r ** 2

    # curvature of gamma / r^2, rescaled back: keeps the FD step r-independent
    R = curvature_of_metric_fn(gamma_fn, phi, fd_step, order=4) / r ** 2
    return float(R[0]) if single else R


def sphere_report(spec, r, q=32, method="auto"):
    """Area plus node extrema of H and the induced scalar curvature."""
    n = spec.n
    quad = SphereQuadrature(n, q)
    symmetric = method == "auto" and (
        spec.family.rotationally_symmetric or spec.family.radial_profile is not None
    )
    if symmetric:
        phi = quad.generic_node()
        H = float(np.atleast_1d(mean_curvature_at(spec, r, phi, method=method))[0])
        rho = float(
            np.atleast_1d(intrinsic_scalar_curvature_at(spec, r, phi, method=method))[0]
        )
        area = sphere_area(spec, r, q, method=method)
        return SphereReport(
            r=float(r), area=area, H_min=H, H_max=H, maxH2=H * H,
            rho_min=rho, rho_max=rho, q=q,
        )
    area = 0.0
    H_min = math.inf
    H_max = -math.inf
    maxH2 = 0.0
    rho_min = math.inf
    rho_max = -math.inf
    for phi, w in quad.blocks():
        gamma = induced_metric_at(spec, r, phi)
        area += float(np.dot(w, np.sqrt(np.linalg.det(gamma))))
        H = mean_curvature_at(spec, r, phi, method="generic")
        rho = intrinsic_scalar_curvature_at(spec, r, phi, method="generic")
        H_min = min(H_min, float(H.min()))
        H_max = max(H_max, float(H.max()))
        maxH2 = max(maxH2, float((H * H).max()))
        rho_min = min(rho_min, float(rho.min()))
        rho_max = max(rho_max, float(rho.max()))
    return SphereReport(
        r=float(r), area=area, H_min=H_min, H_max=H_max, maxH2=maxH2,
        rho_min=rho_min, rho_max=rho_max, q=q,
    )
