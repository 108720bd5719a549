import math

import numpy as np
import pytest

from afmass.metrics import metric_at, schwarzschild, translated
from afmass.sequences import (
    EXPERIMENT_KINDS,
    GridMismatch,
    WindowExitsChart,
    blow_up_window,
    c2_window_distance,
    escaping_window,
    run_semicontinuity_experiment,
    window_grid,
)


class TestWindowGrid:
    def test_shape_and_bounds(self):
        grid = window_grid(3, half_width=0.5, q=4)
        assert grid.shape == (64, 3)
        assert np.abs(grid).max() == pytest.approx(0.5)

    def test_even_q_avoids_center(self):
        grid = window_grid(3, half_width=1.0, q=4)
        assert np.linalg.norm(grid, axis=1).min() > 0.1


class TestBlowUpWindow:
    def test_normalized_at_center(self):
        spec = schwarzschild(3, 1.0)
        p = np.array([3.0, 1.0, 0.5])
        # tiny window: values stay close to the frame-normalized identity
        sample = blow_up_window(spec, p, 64, half_width=0.5, q=2)
        assert np.allclose(sample.g, np.eye(3), atol=1e-2)

    def test_distance_halves_with_zoom(self):
        spec = schwarzschild(3, 1.0)
        p = np.array([3.0, 1.0, 0.5])
        dists = [
            c2_window_distance(blow_up_window(spec, p, i, 0.5, 4))
            for i in (4, 8, 16)
        ]
        for a, b in zip(dists, dists[1:]):
            assert 1.7 < a / b < 2.3

    def test_window_guard(self):
        spec = schwarzschild(3, 1.0, inner_radius=0.5)
        with pytest.raises(WindowExitsChart):
            blow_up_window(spec, np.array([0.6, 0.0, 0.0]), 1, half_width=1.0, q=4)


class TestEscapingWindow:
    def test_matches_translated_metric(self):
        spec = schwarzschild(3, 1.0)
        center = np.array([20.0, 0.0, 0.0])
        sample = escaping_window(spec, center, half_width=0.5, q=3)
        shifted = translated(spec, center)
        assert np.allclose(
            sample.g, metric_at(shifted, sample.grid), atol=1e-12
        )

    def test_distance_decays_at_metric_rate(self):
        # unweighted C^2 distance to flat: dominated by g - delta = O(1/r)
        spec = schwarzschild(3, 1.0)
        d1 = c2_window_distance(escaping_window(spec, np.array([20.0, 0, 0]), 0.5, 4))
        d2 = c2_window_distance(escaping_window(spec, np.array([40.0, 0, 0]), 0.5, 4))
        assert 1.7 < d1 / d2 < 2.3


class TestC2Distance:
    def test_zero_against_self(self):
        spec = schwarzschild(3, 1.0)
        s = escaping_window(spec, np.array([10.0, 0, 0]), 0.5, 3)
        assert c2_window_distance(s, s) == 0.0

    def test_symmetric(self):
        spec = schwarzschild(3, 1.0)
        a = escaping_window(spec, np.array([10.0, 0, 0]), 0.5, 3)
        b = escaping_window(schwarzschild(3, 0.5), np.array([10.0, 0, 0]), 0.5, 3)
        assert c2_window_distance(a, b) == pytest.approx(
            c2_window_distance(b, a), rel=1e-14
        )

    def test_grid_mismatch(self):
        spec = schwarzschild(3, 1.0)
        a = escaping_window(spec, np.array([10.0, 0, 0]), 0.5, 3)
        b = escaping_window(spec, np.array([10.0, 0, 0]), 0.5, 4)
        with pytest.raises(GridMismatch):
            c2_window_distance(a, b)

    def test_nonnegative_and_flat_reference(self):
        spec = schwarzschild(3, 1.0)
        s = escaping_window(spec, np.array([10.0, 0, 0]), 0.5, 3)
        assert c2_window_distance(s) > 0.0


class TestExperiments:
    def test_constant_sequence_equality(self):
        rep = run_semicontinuity_experiment("constant", n=3, indices=(1, 2, 3))
        assert rep.verdict
        assert rep.drop == 0.0
        assert all(d == 0.0 for d in rep.distances)
        assert rep.masses[0] == pytest.approx(1.0, rel=1e-3)

    @pytest.mark.parametrize("kind", ["blow_up", "escaping", "shells"])
    def test_mass_drop_sequences(self, kind):
        rep = run_semicontinuity_experiment(kind, n=3, indices=(2, 4, 8, 16))
        assert rep.verdict
        assert rep.drop > 0.0
        assert rep.limit_mass == 0.0
        # distances decay monotonically at the expected rate
        assert list(rep.distances) == sorted(rep.distances, reverse=True)
        assert rep.exponent == pytest.approx(rep.expected_exponent, rel=0.15)

    def test_shells_keep_exact_mass(self):
        rep = run_semicontinuity_experiment("shells", n=3, indices=(2, 4))
        assert all(
            m == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-10)
            for m in rep.masses
        )

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            run_semicontinuity_experiment("nope")

    def test_kinds_registry(self):
        assert set(EXPERIMENT_KINDS) == {"blow_up", "escaping", "shells", "constant"}

    def test_report_serialization(self):
        rep = run_semicontinuity_experiment("constant", n=3, indices=(1, 2))
        doc = rep.to_json()
        assert doc["verdict"] is True
        rows = rep.csv_rows()
        assert len(rows) == 2 and len(rows[0]) == 3
