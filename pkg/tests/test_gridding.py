"""Grid sampler: exactness against naive, distributional agreement, cost."""

import math

import numpy as np
import pytest
from scipy import stats

import girglab as gl


def _pair(n, kern, d, seed):
    naive = gl.generate(gl.ModelConfig(n=n, beta=2.5, d=d, kernel=kern, seed=seed, sampler="naive"))
    grid = gl.generate(gl.ModelConfig(n=n, beta=2.5, d=d, kernel=kern, seed=seed, sampler="grid"))
    return naive, grid


class TestThresholdExactness:
    """Sharp and banded thresholds have no far-field randomness, so the grid
    must reproduce the naive edge set bit for bit (shared keyed uniforms)."""

    @pytest.mark.parametrize("norm", [gl.Norm.MAX, gl.Norm.MIN_COMPONENT])
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_sharp_identical(self, norm, d):
        kern = gl.ThresholdKernel(norm=norm)
        for seed in (0, 1, 2):
            naive, grid = _pair(1200, kern, d, seed)
            assert np.array_equal(naive.indptr, grid.indptr)
            assert np.array_equal(naive.indices, grid.indices)
            grid.validate()

    def test_banded_identical(self):
        kern = gl.ThresholdKernel(norm=gl.Norm.MAX, c_low=0.6, c_high=1.4)
        naive, grid = _pair(1200, kern, 2, 5)
        assert np.array_equal(naive.indices, grid.indices)

    def test_single_cell_degenerates_to_naive(self):
        # weights large enough that the coarsest level is a single cell:
        # candidate set equals the full pair set and outcomes share the
        # keyed uniforms, so the graphs coincide exactly
        vals = np.sort(np.random.default_rng(0).pareto(1.5, 80) * 40 + 40)[::-1].copy()
        ws = gl.WeightSequence(vals, w_bar=vals[0], beta=2.5)
        for kern in (
            gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX),
            gl.ThresholdKernel(norm=gl.Norm.MAX),
        ):
            cfg_n = gl.ModelConfig(n=80, beta=2.5, d=2, kernel=kern, seed=4, sampler="naive")
            cfg_g = gl.ModelConfig(n=80, beta=2.5, d=2, kernel=kern, seed=4, sampler="grid")
            naive = gl.generate(cfg_n, ws)
            grid = gl.generate(cfg_g, ws)
            assert grid.meta["candidates"] == 80 * 79 // 2
            assert np.array_equal(naive.indices, grid.indices)


class TestDistanceKernelEquivalence:
    """Far cell pairs are re-randomized by thinned proposals, so outputs are
    equal in distribution, not bitwise."""

    KERNELS = [
        (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX), 2),
        (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MIN_COMPONENT), 2),
        (gl.DistanceKernel(alpha=1.5, norm=gl.Norm.MAX), 1),
    ]

    @pytest.mark.parametrize("kern,d", KERNELS)
    def test_marginals_exact(self, kern, d):
        # observed edges vs summed per-pair probabilities from the python
        # kernel path; 4-sigma gate
        n = 60
        obs = expect = var = 0.0
        for s in range(300):
            cfg = gl.ModelConfig(n=n, beta=2.5, d=d, kernel=kern, seed=8000 + s, sampler="grid")
            ws = cfg.sample_weights()
            pos = cfg.sample_positions()
            g = gl.generate(cfg, ws)
            obs += g.edge_count
            for u in range(n):
                for v in range(u + 1, n):
                    p = gl.edge_probability(kern, ws.values[u], ws.values[v], ws.total, pos[u], pos[v])
                    expect += p
                    var += p * (1 - p)
        z = (obs - expect) / math.sqrt(var)
        assert abs(z) < 4.0, (kern, obs, expect, z)

    @pytest.mark.parametrize("kern,d", KERNELS)
    def test_paired_seeds_agree(self, kern, d):
        # same seeds share weights/positions and near-field outcomes; edge
        # counts and degree distributions must stay statistically together
        mn, mg, degs_n, degs_g = [], [], [], []
        for s in range(60):
            naive, grid = _pair(1000, kern, d, s)
            mn.append(naive.edge_count)
            mg.append(grid.edge_count)
            degs_n.append(naive.degrees)
            degs_g.append(grid.degrees)
        mn, mg = np.array(mn, float), np.array(mg, float)
        diff = mn - mg
        se = diff.std(ddof=1) / math.sqrt(diff.size)
        assert abs(diff.mean()) <= 4 * max(se, 1e-9)
        ks = stats.ks_2samp(np.concatenate(degs_n), np.concatenate(degs_g))
        assert ks.pvalue > 0.01


class TestGridMachinery:
    def test_unsupported_combinations(self):
        cfg = gl.ModelConfig(n=100, beta=2.5, kernel=gl.ChungLu())
        with pytest.raises(ValueError, match="grid"):
            gl.generate_grid(cfg)

    def test_deterministic(self):
        kern = gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MIN_COMPONENT)
        cfg = gl.ModelConfig(n=2000, beta=2.5, d=2, kernel=kern, seed=12, sampler="grid")
        a = gl.generate(cfg)
        b = gl.generate(cfg)
        assert np.array_equal(a.indices, b.indices)

    def test_candidate_cost_near_linear(self):
        kern = gl.ThresholdKernel(norm=gl.Norm.MAX)
        cfg = gl.ModelConfig(n=100_000, beta=2.5, d=2, kernel=kern, seed=6, sampler="grid")
        g = gl.generate(cfg)
        assert g.meta["candidates"] <= 50 * (g.n + g.edge_count)

    @pytest.mark.slow
    def test_candidate_cost_near_linear_at_million(self):
        kern = gl.ThresholdKernel(norm=gl.Norm.MAX)
        cfg = gl.ModelConfig(n=1_000_000, beta=2.5, d=2, kernel=kern, seed=6, sampler="grid")
        g = gl.generate(cfg)
        assert g.meta["candidates"] <= 50 * (g.n + g.edge_count)

    def test_positions_match_naive(self):
        kern = gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX)
        naive, grid = _pair(500, kern, 2, 3)
        assert np.array_equal(naive.positions, grid.positions)
        assert np.array_equal(naive.weights.values, grid.weights.values)
