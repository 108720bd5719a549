import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afmass.geometry import unit_sphere_area
from afmass.mass import (
    FitIllConditioned,
    MassEstimate,
    ZeroRhoMin,
    adm_flux,
    adm_mass,
    fg,
    fg_detail,
    fg_limit,
    fit_inverse_power,
    flux_constant,
    penrose_like_check,
)
from afmass.metrics import (
    conformally_flat,
    euclidean,
    harmonic_dipole_field,
    harmonically_flat,
    scaled,
    schwarzschild,
)

# closed form: flux through S_r of a radial conformal power-tail metric is
# m U(r)^{(6-n)/(n-2)}; frozen for m=1.3, r=50
FLUX_ORACLE = {
    3: 1.3513619560999997,
    4: 1.300338,
    5: 1.3000022533294275,
    6: 1.3,
    7: 1.2999999994592,
}


def test_flux_constant_n3():
    assert flux_constant(3) == pytest.approx(1.0 / (16.0 * math.pi), rel=1e-14)


@pytest.mark.parametrize("n", sorted(FLUX_ORACLE))
def test_raw_flux_closed_form(n):
    spec = schwarzschild(n, 1.3)
    assert adm_flux(spec, 50.0, q=16) == pytest.approx(FLUX_ORACLE[n], rel=1e-10)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_adm_mass_schwarzschild(n):
    spec = schwarzschild(n, 1.3)
    est = adm_mass(spec, radii=(50.0, 100.0, 200.0, 400.0), q=32)
    assert est.value == pytest.approx(1.3, rel=1e-3)
    assert est.model["p"] >= 1.0


def test_euclidean_mass_zero():
    est = adm_mass(euclidean(3), radii=(10.0, 20.0), q=8)
    assert est.value == pytest.approx(0.0, abs=1e-12)


def test_mass_scaling_law():
    # m(lambda^2 g) = lambda^{n-2} m(g)
    base = schwarzschild(4, 1.0)
    spec = scaled(base, 2.0)
    est = adm_mass(spec, radii=(50.0, 100.0), q=16)
    assert est.value == pytest.approx(4.0, rel=1e-6)


def test_harmonically_flat_mass():
    spec = harmonically_flat(3, 0.25)
    est = adm_mass(spec, radii=(50.0, 100.0, 200.0), q=16)
    assert est.value == pytest.approx(0.5, rel=1e-4)


class TestFitInversePower:
    def test_exact_model_recovered(self):
        radii = np.array([10.0, 20.0, 40.0, 80.0])
        values = 2.0 + 3.0 * radii ** -1.5
        c0, c1, rms = fit_inverse_power(radii, values, 1.5)
        assert c0 == pytest.approx(2.0, rel=1e-12)
        assert c1 == pytest.approx(3.0, rel=1e-10)
        assert rms < 1e-12

    def test_single_sample(self):
        c0, c1, rms = fit_inverse_power([10.0], [5.0], 1.0)
        assert (c0, c1, rms) == (5.0, 0.0, 0.0)

    def test_empty_raises(self):
        with pytest.raises(FitIllConditioned):
            fit_inverse_power([], [], 1.0)

    def test_degenerate_radii_raise(self):
        with pytest.raises(FitIllConditioned):
            fit_inverse_power([10.0, 10.0], [1.0, 2.0], 1.0)

    @given(
        st.floats(-5.0, 5.0),
        st.floats(-10.0, 10.0),
        st.floats(0.5, 3.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_recovers_any_exact_model(self, c0, c1, p):
        radii = np.array([5.0, 11.0, 23.0, 47.0])
        values = c0 + c1 * radii ** -p
        f0, f1, rms = fit_inverse_power(radii, values, p)
        assert f0 == pytest.approx(c0, abs=1e-8)
        assert rms < 1e-8


class TestFg:
    def test_schwarzschild_exact_at_every_radius(self):
        # centered spheres of the model metric: fg(S_r) = m identically
        spec = schwarzschild(3, 1.0)
        for r in (10.0, 50.0, 200.0):
            assert fg(spec, r) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", [4, 5, 7])
    def test_schwarzschild_exact_high_dim(self, n):
        spec = schwarzschild(n, 2.0)
        assert fg(spec, 20.0) == pytest.approx(2.0, abs=1e-8)

    def test_euclidean_fg_zero(self):
        assert fg(euclidean(3), 10.0, q=16, method="generic") == pytest.approx(
            0.0, abs=1e-5
        )

    def test_dipole_residual_halves(self):
        spec = conformally_flat(3, harmonic_dipole_field(3, 0.5, 0.3))
        res = [abs(fg(spec, r, q=16) - 1.0) for r in (20.0, 40.0, 80.0)]
        for a, b in zip(res, res[1:]):
            assert 1.7 < a / b < 2.3

    def test_fg_limit_extrapolates_dipole(self):
        spec = conformally_flat(3, harmonic_dipole_field(3, 0.5, 0.3))
        est = fg_limit(spec, (40.0, 80.0, 160.0, 320.0), q=16)
        assert est.value == pytest.approx(1.0, abs=2e-2)
        assert est.model["p"] == 1.0

    def test_zero_rho_min_raises(self):
        # fg undefined when the induced curvature minimum is not positive
        from afmass.spheres import SphereReport

        rep = SphereReport(r=10.0, area=1.0, H_min=0.1, H_max=0.2, maxH2=0.04,
                           rho_min=-0.1, rho_max=0.1, q=8)
        with pytest.raises(ZeroRhoMin):
            fg_detail(schwarzschild(3, 1.0), 10.0, report=rep)

    def test_detail_fields(self):
        d = fg_detail(schwarzschild(3, 1.0), 10.0, q=8)
        for key in ("fg", "r", "area", "maxH2", "rho_min", "rho_max", "q"):
            assert key in d
        assert d["area"] == pytest.approx(1527.4502021569917, rel=1e-12)


class TestPenroseLikeCheck:
    def test_schwarzschild(self):
        rec = penrose_like_check(schwarzschild(3, 1.0), 20.0, q=8)
        assert rec["hypothesis_holds"]
        assert rec["inequality_holds"]
        assert rec["fg"] == pytest.approx(1.0, abs=1e-10)

    def test_dipole(self):
        spec = conformally_flat(
            3, harmonic_dipole_field(3, 0.5, 0.3), mass_hint=1.0
        )
        rec = penrose_like_check(spec, 50.0, q=12)
        assert rec["hypothesis_holds"]
        assert rec["inequality_holds"]
        assert rec["fg"] < rec["mass"]


def test_mass_estimate_json_roundtrip():
    est = MassEstimate(value=1.0, error=1e-4, radii=(50.0, 100.0),
                       raw=(1.01, 1.005), model={"c0": 1.0, "c1": 0.5, "p": 1.0})
    back = MassEstimate.from_json(est.to_json())
    assert back == est
