import numpy as np
import pytest

from afmass.curvature import (
    christoffel,
    curvature_of_metric_fn,
    fd_metric_derivatives,
    ricci_tensor,
    scalar_curvature,
)


def round_sphere_metric(R, d):
    """Round d-sphere of radius R in iterated-angle coordinates."""

    def fn(phi):
        phi = np.atleast_2d(phi)
        N = phi.shape[0]
        g = np.zeros((N, d, d))
        sin_running = np.ones(N)
        for k in range(d):
            g[:, k, k] = R ** 2 * sin_running ** 2
            sin_running = sin_running * np.sin(phi[:, k])
        return g

    return fn


def test_flat_metric_curvature_zero():
    g = np.tile(np.eye(3), (4, 1, 1))
    dg = np.zeros((4, 3, 3, 3))
    d2g = np.zeros((4, 3, 3, 3, 3))
    assert np.allclose(scalar_curvature(g, dg, d2g), 0.0)
    assert np.allclose(ricci_tensor(g, dg, d2g), 0.0)


def test_christoffel_flat_zero():
    g = np.tile(np.eye(3), (2, 1, 1))
    dg = np.zeros((2, 3, 3, 3))
    assert np.allclose(christoffel(np.linalg.inv(g), dg), 0.0)


@pytest.mark.parametrize("d,R", [(2, 1.0), (2, 3.0), (3, 2.0), (4, 1.5)])
def test_round_sphere_scalar_curvature(d, R):
    # R_scal = d (d-1) / R^2
    fn = round_sphere_metric(R, d)
    phi = np.full((3, d), 0.0)
    phi[:, :] = np.linspace(0.8, 1.8, 3)[:, None]
    scal = curvature_of_metric_fn(fn, phi, 2.2e-3, order=4)
    assert scal == pytest.approx(d * (d - 1) / R ** 2, rel=1e-8)


def test_fd_derivatives_match_polynomial():
    # quadratic metric entries: FD second derivatives are exact
    A = np.array([[0.3, 0.1], [0.1, -0.2]])

    def fn(x):
        x = np.atleast_2d(x)
        N = x.shape[0]
        g = np.tile(np.eye(2), (N, 1, 1))
        quad = np.einsum("ni,ij,nj->n", x, A, x)
        g[:, 0, 0] += 0.1 * quad
        g[:, 0, 1] += 0.05 * x[:, 0] * x[:, 1]
        g[:, 1, 0] = g[:, 0, 1]
        return g

    x = np.array([[0.4, -0.7]])
    for order in (2, 4):
        dg, d2g = fd_metric_derivatives(fn, x, 1e-3, order=order)
        # d_0 g_00 = 0.1 * 2 (A x)_0
        expect = 0.2 * (A @ x[0])[0]
        assert dg[0, 0, 0, 0] == pytest.approx(expect, abs=1e-8)
        assert d2g[0, 0, 0, 0, 0] == pytest.approx(0.2 * A[0, 0], abs=1e-6)
        assert d2g[0, 0, 1, 0, 1] == pytest.approx(0.05, abs=1e-6)


def test_fd_rejects_bad_order():
    fn = lambda x: np.tile(np.eye(2), (np.atleast_2d(x).shape[0], 1, 1))
    with pytest.raises(ValueError):
        fd_metric_derivatives(fn, np.zeros((1, 2)), 1e-3, order=3)


def test_order4_beats_order2_on_smooth_metric():
    def fn(x):
        x = np.atleast_2d(x)
        N = x.shape[0]
        g = np.tile(np.eye(2), (N, 1, 1))
        g[:, 0, 0] += 0.3 * np.sin(x[:, 0]) * np.cos(x[:, 1])
        g[:, 1, 1] += 0.2 * np.exp(-x[:, 0] ** 2 / 4)
        return g

    x = np.array([[0.5, 0.3]])
    h = 0.05
    exact_d2 = -0.3 * np.sin(0.5) * np.cos(0.3)
    _, d2_2 = fd_metric_derivatives(fn, x, h, order=2)
    _, d2_4 = fd_metric_derivatives(fn, x, h, order=4)
    err2 = abs(d2_2[0, 0, 0, 0, 0] - exact_d2)
    err4 = abs(d2_4[0, 0, 0, 0, 0] - exact_d2)
    assert err4 < err2 / 10
