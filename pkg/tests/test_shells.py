import math

import numpy as np
import pytest

from afmass.geometry import unit_sphere_area
from afmass.mass import adm_mass
from afmass.metrics import metric_at, scalar_curvature_at
from afmass.shells import (
    GridTooCoarse,
    default_shell_density,
    shell_mass,
    shell_matter_coupling,
    shell_metric,
    shell_tail_coefficient,
    solve_shell_potential,
)
from afmass.weighted import mass_matter_defect

# closed forms: a = 1 / ((n-2) omega_{n-1}), mass = 2a
TAIL_ORACLE = {3: 0.07957747154594767, 4: 0.025330295910584444}
MASS_ORACLE = {3: 0.15915494309189535, 4: 0.05066059182116889}


class TestDensity:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_unit_total_integral(self, n):
        dens = default_shell_density(n)
        xg, wg = np.polynomial.legendre.leggauss(96)
        s = 0.25 * (xg + 1.0) + 0.5
        w = 0.25 * wg
        total = unit_sphere_area(n) * float(np.dot(w, s ** (n - 1) * dens.rho(s)))
        assert total == pytest.approx(1.0, rel=1e-12)

    def test_support(self):
        dens = default_shell_density(3)
        s = np.array([0.1, 0.5, 0.75, 1.0, 1.5])
        vals = dens.rho(s)
        assert vals[0] == 0.0 and vals[1] == 0.0 and vals[3] == 0.0 and vals[4] == 0.0
        assert vals[2] > 0.0

    def test_nonnegative(self):
        dens = default_shell_density(3)
        s = np.linspace(0.0, 1.5, 301)
        assert np.all(dens.rho(s) >= 0.0)


class TestPotential:
    @pytest.mark.parametrize("n", [3, 4])
    def test_tail_coefficient(self, n):
        assert shell_tail_coefficient(n) == pytest.approx(TAIL_ORACLE[n], rel=1e-12)
        prof = solve_shell_potential(n, 1)
        assert prof.tail_coefficient == pytest.approx(TAIL_ORACLE[n], rel=1e-10)

    def test_tail_independent_of_index(self):
        tails = [
            solve_shell_potential(3, i).tail_coefficient for i in (1, 2, 4, 8)
        ]
        assert max(tails) - min(tails) < 1e-14

    def test_scaling_identity(self):
        # v_i(x) = i^{2-n} v_1(x / i)
        n = 3
        p1 = solve_shell_potential(n, 1)
        p4 = solve_shell_potential(n, 4)
        r = np.array([0.3, 2.2, 3.1, 5.0, 20.0])
        lhs = p4.u(r) - 1.0
        rhs = 4.0 ** (2 - n) * (p1.u(r / 4.0) - 1.0)
        assert np.allclose(lhs, rhs, atol=1e-14)

    def test_derivatives_consistent(self):
        p = solve_shell_potential(3, 1)
        h = 1e-5
        rr = np.array([0.6, 0.8, 0.95, 1.5])
        fd1 = (p.u(rr + h) - p.u(rr - h)) / (2 * h)
        assert np.allclose(fd1, p.du(rr), atol=1e-9)
        fd2 = (p.u(rr + h) - 2 * p.u(rr) + p.u(rr - h)) / h ** 2
        assert np.allclose(fd2, p.d2u(rr), atol=1e-5)

    def test_constant_inside_cavity(self):
        p = solve_shell_potential(3, 4)
        r = np.array([0.1, 0.5, 1.0, 1.9])
        vals = p.u(r)
        assert np.ptp(vals) < 1e-14
        assert np.allclose(p.du(r), 0.0)

    def test_grid_guard(self):
        with pytest.raises(GridTooCoarse):
            solve_shell_potential(3, 1, radial_q=8)


class TestShellMetrics:
    @pytest.mark.parametrize("n", [3, 4])
    @pytest.mark.parametrize("i", [1, 2, 4, 8])
    def test_mass_invariant(self, n, i):
        spec = shell_metric(n, i)
        est = adm_mass(spec, radii=(4.0 * i, 8.0 * i, 16.0 * i, 32.0 * i), q=8)
        assert est.value == pytest.approx(MASS_ORACLE[n], rel=1e-3)

    def test_flat_inside_cavity(self):
        spec = shell_metric(3, 4)
        x = np.array([[1.0, 0.5, 0.0]])
        R = scalar_curvature_at(spec, x)
        assert R == pytest.approx(0.0, abs=1e-10)
        g = metric_at(spec, x)
        # conformal to flat with a constant factor: curvature-free
        assert np.allclose(g[0], g[0, 0, 0] * np.eye(3))

    def test_scalar_flat_outside_support(self):
        spec = shell_metric(3, 2)
        x = np.array([[3.0, 0.0, 0.0], [10.0, 1.0, 0.0]])
        assert np.allclose(scalar_curvature_at(spec, x), 0.0, atol=1e-10)

    def test_nonnegative_curvature_in_support(self):
        spec = shell_metric(3, 2)
        x = np.array([[1.5, 0.0, 0.0], [1.7, 0.2, 0.0]])
        assert np.all(scalar_curvature_at(spec, x) >= 0.0)


class TestMatterCoupling:
    def test_coupling_matches_curvature_integral(self):
        # 1-d coupling formula against the full n-d scalar curvature integral
        spec = shell_metric(3, 2)
        rep = mass_matter_defect(spec, inner=0.5, outer=4.0, q=8)
        assert rep.matter == pytest.approx(shell_matter_coupling(3, 2), rel=1e-10)

    @pytest.mark.parametrize("n", [3, 4])
    def test_defect_negative_and_shrinking(self, n):
        defects = []
        for i in (1, 2, 4, 8):
            defects.append(MASS_ORACLE[n] - shell_matter_coupling(n, i))
        assert all(d < 0.0 for d in defects)
        mags = [abs(d) for d in defects]
        assert mags == sorted(mags, reverse=True)
        # defect carries the i^{2-n} scale of v_i on its own support
        assert mags[0] / mags[3] == pytest.approx(8.0 ** (n - 2), rel=0.05)

    def test_mass_hint(self):
        assert shell_metric(3, 5).family.mass_hint == pytest.approx(
            MASS_ORACLE[3], rel=1e-12
        )
        assert shell_mass(3) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)
