"""Torus distances, ball volumes, inverses, and their Monte Carlo consistency."""

import math

import numpy as np
import pytest

from girglab.geometry import (
    Norm,
    ball_volume,
    inverse_volume,
    max_distance,
    read_positions,
    sample_positions,
    torus_distance,
    write_positions,
)


class TestTorusDistance:
    def test_wraparound_1d(self):
        for norm in Norm:
            assert torus_distance([0.9], [0.1], norm) == pytest.approx(0.2)

    def test_min_component_picks_smallest(self):
        assert torus_distance([0.0, 0.0], [0.3, 0.01], Norm.MIN_COMPONENT) == pytest.approx(0.01)

    def test_euclidean_3_4_5(self):
        assert torus_distance([0.0, 0.0], [0.3, 0.4], Norm.EUCLIDEAN) == pytest.approx(0.5)

    def test_symmetry_and_bounds(self):
        rng = np.random.default_rng(0)
        for d in (1, 2, 3):
            a = rng.random((200, d))
            b = rng.random((200, d))
            for norm in Norm:
                dist_ab = torus_distance(a, b, norm)
                dist_ba = torus_distance(b, a, norm)
                assert np.allclose(dist_ab, dist_ba)
                assert np.all(dist_ab >= 0)
                assert np.all(dist_ab <= max_distance(d, norm) + 1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            torus_distance([0.1, 0.2], [0.1], Norm.MAX)

    def test_min_component_breaks_triangle_inequality(self):
        # frozen witness: close to y in one axis each, far in all axes jointly
        x = [0.0, 0.25]
        y = [0.0, 0.0]
        z = [0.25, 0.0]
        d = Norm.MIN_COMPONENT
        assert torus_distance(x, y, d) + torus_distance(y, z, d) < torus_distance(x, z, d)


class TestBallVolume:
    def test_zero_radius(self):
        for norm in Norm:
            for d in (1, 2, 3):
                assert ball_volume(0.0, d, norm) == 0.0

    def test_min_component_hand_values(self):
        assert ball_volume(0.25, 1, Norm.MIN_COMPONENT) == pytest.approx(0.5)
        assert ball_volume(0.25, 2, Norm.MIN_COMPONENT) == pytest.approx(0.75)

    def test_max_norm_formula(self):
        assert ball_volume(0.25, 2, Norm.MAX) == pytest.approx(0.25)
        assert ball_volume(0.5, 3, Norm.MAX) == 1.0
        assert ball_volume(2.0, 1, Norm.MAX) == 1.0

    def test_euclidean_d2_closed_form_endpoints(self):
        # continuous at r = 1/2 and saturates exactly at r = sqrt(2)/2
        lo = ball_volume(0.5 - 1e-12, 2, Norm.EUCLIDEAN)
        hi = ball_volume(0.5 + 1e-12, 2, Norm.EUCLIDEAN)
        assert hi == pytest.approx(lo, abs=1e-9)
        assert ball_volume(math.sqrt(2) / 2, 2, Norm.EUCLIDEAN) == pytest.approx(1.0)

    def test_monotone_continuous_reaches_one(self):
        for norm in Norm:
            for d in (1, 2, 3):
                rs = np.linspace(0, max_distance(d, norm), 400)
                vols = ball_volume(rs, d, norm)
                assert np.all(np.diff(vols) >= -1e-12)
                assert vols[0] == 0.0
                assert vols[-1] == pytest.approx(1.0, abs=1e-9)
                assert np.all(np.abs(np.diff(vols)) < 0.02 + 5 / len(rs))

    @pytest.mark.slow
    def test_monte_carlo_consistency(self):
        rng = np.random.default_rng(20240601)
        n = 1_000_000
        for norm in Norm:
            for d in (1, 2, 3):
                pts = rng.random((n, d))
                for r in (0.05, 0.2, 0.45):
                    vol = ball_volume(r, d, norm)
                    for _ in range(5):
                        center = rng.random(d)
                        emp = np.mean(torus_distance(pts, center, norm) <= r)
                        se = math.sqrt(max(vol * (1 - vol), 1e-12) / n)
                        assert abs(emp - vol) <= 4 * se + 1e-9, (norm, d, r)

    @pytest.mark.slow
    def test_monte_carlo_euclid_wraparound_regime(self):
        # r > 1/2 exercises the tabulated region for d = 3
        rng = np.random.default_rng(7)
        n = 1_000_000
        pts = rng.random((n, 3))
        center = rng.random(3)
        for r in (0.55, 0.7):
            vol = ball_volume(r, 3, Norm.EUCLIDEAN)
            emp = np.mean(torus_distance(pts, center, Norm.EUCLIDEAN) <= r)
            se = math.sqrt(vol * (1 - vol) / n)
            assert abs(emp - vol) <= 4 * se + 1e-3


class TestInverseVolume:
    def test_trivial(self):
        for norm in Norm:
            assert inverse_volume(0.0, 2, norm) == 0.0

    def test_max_norm_hand_value(self):
        assert inverse_volume(0.25, 2, Norm.MAX) == pytest.approx(0.25)

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        for norm in Norm:
            for d in (1, 2, 3):
                for v in rng.random(1000):
                    r = inverse_volume(float(v), d, norm)
                    assert ball_volume(r, d, norm) == pytest.approx(v, abs=1e-10)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            inverse_volume(1.5, 2, Norm.MAX)


class TestPositions:
    def test_sample_in_unit_cube_deterministic(self):
        a = sample_positions(1000, 3, seed=5)
        b = sample_positions(1000, 3, seed=5)
        assert np.array_equal(a, b)
        assert a.shape == (1000, 3)
        assert np.all((a >= 0) & (a < 1))

    def test_file_round_trip(self, tmp_path):
        pos = sample_positions(50, 2, seed=1)
        path = tmp_path / "pos.txt"
        with open(path, "w") as fh:
            write_positions(pos, fh)
        with open(path) as fh:
            back = read_positions(fh, 50, 2, path=path)
        assert np.array_equal(back, pos)

    def test_bad_coordinate_count(self, tmp_path):
        path = tmp_path / "pos.txt"
        path.write_text("0.1 0.2\n0.3\n")
        with open(path) as fh:
            with pytest.raises(ValueError, match="line 2"):
                read_positions(fh, 2, 2, path=path)
