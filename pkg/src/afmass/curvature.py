"""Coordinate curvature formulas and finite-difference stencils.

All routines are batched: metric arrays have shape (N, d, d), first
derivatives (N, d, d, d) with dg[:, k, i, j] = d_k g_ij, and second
derivatives (N, d, d, d, d) with d2g[:, k, l, i, j] = d_k d_l g_ij.
"""

import numpy as np

__all__ = [
    "christoffel",
    "ricci_tensor",
    "scalar_curvature",
    "fd_metric_derivatives",
    "curvature_of_metric_fn",
]


def christoffel(ginv, dg):
    """Christoffel symbols Gamma^k_ij = 0.5 g^{kl}(d_i g_lj + d_j g_il - d_l g_ij).

    Returns (N, d, d, d) indexed [.., k, i, j].
    """
    bracket = (
        np.einsum("nilj->nlij", dg)
        + np.einsum("njil->nlij", dg)
        - np.einsum("nlij->nlij", dg)
    )
    return 0.5 * np.einsum("nkl,nlij->nkij", ginv, bracket)


def ricci_tensor(g, dg, d2g):
    """Ricci tensor from the coordinate formula.

    R_jk = d_i Gamma^i_jk - d_j Gamma^i_ik + Gamma^i_ip Gamma^p_jk
           - Gamma^i_kp Gamma^p_ij.
    """
    ginv = np.linalg.inv(g)
    gamma = christoffel(ginv, dg)
    # d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
    dginv = -np.einsum("nka,nmab,nbl->nmkl", ginv, dg, ginv)
    # d_m Gamma^k_ij
    bracket = (
        np.einsum("nmilj->nmlij", d2g)
        + np.einsum("nmjil->nmlij", d2g)
        - np.einsum("nmlij->nmlij", d2g)
    )
    dgamma = 0.5 * (
        np.einsum("nmkl,nlij->nmkij", dginv, 2.0 * _sym_bracket(dg))
        + np.einsum("nkl,nmlij->nmkij", ginv, bracket)
    )
    term1 = np.einsum("niijk->njk", dgamma)
    term2 = np.einsum("njiik->njk", dgamma)
    term3 = np.einsum("niip,npjk->njk", gamma, gamma)
    term4 = np.einsum("nikp,npij->njk", gamma, gamma)
    ric = term1 - term2 + term3 - term4
    return 0.5 * (ric + np.swapaxes(ric, -1, -2))


def _sym_bracket(dg):
    return 0.5 * (
        np.einsum("nilj->nlij", dg)
        + np.einsum("njil->nlij", dg)
        - np.einsum("nlij->nlij", dg)
    )


def scalar_curvature(g, dg, d2g):
    """Scalar curvature R = g^{jk} R_jk.  Returns (N,)."""
    ric = ricci_tensor(g, dg, d2g)
    return np.einsum("njk,njk->n", np.linalg.inv(g), ric)


# 4th-order central stencil for first derivatives
_D1_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_D1_COEFFS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


def fd_metric_derivatives(fn, x, h, order=2):
    """Finite-difference first and second derivatives of a matrix field.

    fn maps (N, d) -> (N, d, d).  Returns (dg, d2g) with the layout described
    in the module docstring.  order 2 uses 3-point stencils; order 4 uses
    5-point stencils (first derivatives) and their composition (mixed second
    derivatives).
    """
    x = np.asarray(x, dtype=float)
    N, d = x.shape
    f0 = fn(x)
    dg = np.empty((N, d, d, d))
    d2g = np.empty((N, d, d, d, d))

    def shift(k, a, m=None, b=0.0):
        y = x.copy()
        y[:, k] += a * h
        if m is not None:
            y[:, m] += b * h
        return fn(y)

    if order == 2:
        plus = [shift(k, 1.0) for k in range(d)]
        minus = [shift(k, -1.0) for k in range(d)]
        for k in range(d):
            dg[:, k] = (plus[k] - minus[k]) / (2.0 * h)
            d2g[:, k, k] = (plus[k] - 2.0 * f0 + minus[k]) / h ** 2
        for k in range(d):
            for m in range(k + 1, d):
                mixed = (
                    shift(k, 1.0, m, 1.0)
                    - shift(k, 1.0, m, -1.0)
                    - shift(k, -1.0, m, 1.0)
                    + shift(k, -1.0, m, -1.0)
                ) / (4.0 * h ** 2)
                d2g[:, k, m] = mixed
                d2g[:, m, k] = mixed
    elif order == 4:
        vals = {}
        for k in range(d):
            for a in (-2.0, -1.0, 1.0, 2.0):
                vals[(k, a)] = shift(k, a)
        for k in range(d):
            dg[:, k] = sum(
                c * vals[(k, a)] for a, c in zip(_D1_OFFSETS, _D1_COEFFS)
            ) / h
            d2g[:, k, k] = (
                -vals[(k, 2.0)]
                + 16.0 * vals[(k, 1.0)]
                - 30.0 * f0
                + 16.0 * vals[(k, -1.0)]
                - vals[(k, -2.0)]
            ) / (12.0 * h ** 2)
        for k in range(d):
            for m in range(k + 1, d):
                mixed = 0.0
                for a, ca in zip(_D1_OFFSETS, _D1_COEFFS):
                    for b, cb in zip(_D1_OFFSETS, _D1_COEFFS):
                        mixed = mixed + ca * cb * shift(k, a, m, b)
                mixed = mixed / h ** 2
                d2g[:, k, m] = mixed
                d2g[:, m, k] = mixed
    else:
        raise ValueError("order must be 2 or 4")
    return dg, d2g


def curvature_of_metric_fn(fn, x, h, order=4):
    """Scalar curvature of a metric given only as a function of coordinates.

    fn maps (N, d) -> (N, d, d); derivatives are taken by finite differences
    with step h.  Returns (N,).
    """
    x = np.asarray(x, dtype=float)
    g = fn(x)
    dg, d2g = fd_metric_derivatives(fn, x, h, order=order)
    return scalar_curvature(g, dg, d2g)
