"""Structural measurements against hand values and pure-python oracles."""

import math

import numpy as np
import pytest

import girglab as gl
from girglab.analysis import _pair_distances, distance_target, giant_members

from conftest import (
    adjacency_lists,
    bfs_distances_py,
    components_py,
    edge_list,
    graph_from_edges,
)


def star_graph(leaves=10):
    return graph_from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path_graph(n):
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


class TestDegreeReport:
    def test_star(self):
        rep = gl.degree_report(star_graph(10), fit_range=(5, 100))
        assert rep.ccdf_at(1) == 11
        assert rep.ccdf_at(2) == 1
        assert rep.ccdf_at(10) == 1
        assert rep.ccdf_at(11) == 0
        assert rep.max_degree == 10

    def test_edgeless_graph_fit_fails(self):
        g = graph_from_edges(20, [])
        with pytest.raises(ValueError, match="fewer than two"):
            gl.degree_report(g, fit_range=(5, 100))

    def test_ccdf_matches_brute_force(self, small_graph):
        rep = gl.degree_report(small_graph, fit_range=(2, 30))
        deg = small_graph.degrees
        rng = np.random.default_rng(1)
        for d in rng.integers(0, rep.max_degree + 3, 100):
            assert rep.ccdf_at(int(d)) == int(np.sum(deg >= d))
        assert rep.ccdf_at(0) == small_graph.n

    def test_bad_fit_range(self, small_graph):
        with pytest.raises(ValueError):
            gl.degree_report(small_graph, fit_range=(0, 10))
        with pytest.raises(ValueError):
            gl.degree_report(small_graph, fit_range=(10, 10))

    def test_slope_recovers_synthetic_power_law(self):
        # disjoint stars with hub-degree counts chosen so that the CCDF
        # quarters when the degree doubles: slope -2 on the log-log grid
        edges = []
        node = 0
        for hub_deg, copies in [(40, 1), (20, 3), (10, 12), (5, 48)]:
            for _ in range(copies):
                hub = node
                node += 1
                for _ in range(hub_deg):
                    edges.append((hub, node))
                    node += 1
        g = graph_from_edges(node, edges)
        rep = gl.degree_report(g, fit_range=(5, 40))
        assert rep.fitted_slope == pytest.approx(-2.0, abs=0.3)
        assert rep.slope_stderr >= 0.0


class TestComponents:
    def test_edgeless(self):
        g = graph_from_edges(10, [])
        rep = gl.components(g)
        assert rep.count == 10
        assert rep.giant_fraction == pytest.approx(0.1)
        assert rep.second_size == 1

    def test_path_is_connected(self):
        rep = gl.components(path_graph(30))
        assert rep.count == 1
        assert rep.giant_fraction == 1.0
        assert rep.second_size == 0

    def test_labels_consistent_with_oracle(self, small_graph):
        rep = gl.components(small_graph)
        for u, v in edge_list(small_graph):
            assert rep.component_ids[u] == rep.component_ids[v]
        oracle = components_py(adjacency_lists(small_graph))
        # same partition up to relabeling
        mapping = {}
        for mine, theirs in zip(rep.component_ids, oracle):
            assert mapping.setdefault(int(mine), theirs) == theirs
        assert int(rep.sizes.sum()) == small_graph.n


class TestCoreReport:
    def test_empty_core_errors(self):
        vals = np.linspace(5.0, 1.0, 10)
        ws = gl.WeightSequence(vals, w_bar=10.0, beta=2.5)
        g = graph_from_edges(10, [(0, 1)])
        g.weights = ws
        with pytest.raises(ValueError, match="empty"):
            gl.core_report(g)

    def test_singleton_core(self):
        g = graph_from_edges(5, [(0, 1), (1, 2)])
        vals = np.array([9.0, 2.0, 2.0, 2.0, 2.0])
        g.weights = gl.WeightSequence(vals, w_bar=5.0, beta=2.5)
        rep = gl.core_report(g)
        assert rep.core_vertices == 1
        assert rep.core_connected
        assert rep.core_diameter == 0

    def test_disconnected_core(self):
        g = graph_from_edges(6, [(0, 2), (1, 3)])
        vals = np.array([9.0, 8.0, 2.0, 2.0, 2.0, 2.0])
        g.weights = gl.WeightSequence(vals, w_bar=5.0, beta=2.5)
        rep = gl.core_report(g)
        assert rep.core_vertices == 2
        assert not rep.core_connected
        assert rep.core_diameter == -1

    def test_triangle_core(self):
        g = graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 5)])
        vals = np.array([9.0, 8.0, 7.0, 2.0, 2.0, 2.0])
        g.weights = gl.WeightSequence(vals, w_bar=5.0, beta=2.5)
        rep = gl.core_report(g)
        assert rep.core_vertices == 3
        assert rep.core_connected
        assert rep.core_diameter == 1


class TestGreedyPath:
    def test_core_start_is_trivial(self, small_graph):
        path, reached = gl.greedy_path(small_graph, 0)
        assert path == [0]
        assert reached

    def test_isolated_vertex(self):
        g = graph_from_edges(5, [(0, 1)])
        path, reached = gl.greedy_path(g, 4)
        assert path == [4]
        assert not reached

    def test_weights_strictly_increase_along_path(self, small_graph):
        w = small_graph.weights.values
        rng = np.random.default_rng(2)
        for v in rng.integers(0, small_graph.n, 60):
            path, _ = gl.greedy_path(small_graph, int(v))
            ww = w[path]
            assert np.all(np.diff(ww) > 0) or len(path) == 1

    def test_stops_without_upward_neighbor(self):
        # 3 is heaviest among its neighborhood but below the core
        g = graph_from_edges(5, [(3, 4)])
        vals = np.array([9.0, 8.0, 7.0, 3.0, 2.0])
        g.weights = gl.WeightSequence(vals, w_bar=5.0, beta=2.5)
        path, reached = gl.greedy_path(g, 4)
        assert path == [4, 3]
        assert not reached


class TestRestrictedNeighborhood:
    def test_depth_zero(self, small_graph):
        members, _ = gl.restricted_neighborhood(small_graph, 7, w=math.inf, k=0)
        assert list(members) == [7]

    def test_weight_floor_blocks_everything(self, small_graph):
        w_min = small_graph.weights.w_min
        members, _ = gl.restricted_neighborhood(small_graph, 7, w=w_min, k=5)
        assert list(members) == [7]

    def test_unrestricted_equals_component(self, small_graph):
        comp = gl.components(small_graph)
        v = 13
        members, _ = gl.restricted_neighborhood(
            small_graph, v, w=math.inf, k=small_graph.n
        )
        expect = np.flatnonzero(comp.component_ids == comp.component_ids[v])
        assert np.array_equal(members, expect)

    def test_hit_heavy_semantics(self):
        # 0 heavy; chain 0-1-2-3; restricted to w < 5 from vertex 3
        g = graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])
        vals = np.array([9.0, 2.0, 2.0, 2.0])
        g.weights = gl.WeightSequence(vals, w_bar=5.0, beta=2.5)
        members, hit = gl.restricted_neighborhood(g, 3, w=5.0, k=1)
        assert list(members) == [2, 3]
        assert not hit  # 2's neighbors are 1 and 3, both light
        members, hit = gl.restricted_neighborhood(g, 3, w=5.0, k=2)
        assert list(members) == [1, 2, 3]
        assert hit  # 1 sees the heavy vertex 0

    def test_low_weight_bulk_probe(self):
        # a low-weight start either sees a heavy-adjacent vertex quickly or
        # lives in a tiny component
        cfg = gl.ModelConfig(n=30_000, beta=2.5, d=1, kernel=gl.ChungLu(), seed=21)
        g = gl.generate(cfg)
        w = math.log(g.n) ** 2
        k = min(g.n, math.ceil(w**2.5))
        rng = np.random.default_rng(0)
        light = np.flatnonzero(g.weights.values < w)
        bad = 0
        for v in rng.choice(light, size=40, replace=False):
            members, hit = gl.restricted_neighborhood(g, int(v), w=w, k=k)
            if not hit and members.size >= k:
                bad += 1
        assert bad == 0


class TestDistanceReport:
    def test_complete_graph_mean_one(self):
        g = complete_graph(5)
        rep = gl.distance_report(g, n_pairs=10, seed=0)
        assert rep.exhaustive
        assert rep.mean_distance == 1.0
        assert rep.stderr == 0.0
        assert rep.diameter_estimate == 1

    def test_path_all_pairs_mean(self):
        # P4: pairs at distance 1,1,1,2,2,3 -> mean 10/6
        rep = gl.distance_report(path_graph(4), n_pairs=6, seed=0)
        assert rep.exhaustive
        assert rep.mean_distance == pytest.approx(5.0 / 3.0, abs=1e-12)
        assert rep.diameter_estimate == 3

    def test_sampled_close_to_exact(self, small_graph):
        exact = gl.distance_report(small_graph, n_pairs=10**9, seed=0)
        assert exact.exhaustive
        sampled = gl.distance_report(small_graph, n_pairs=2000, seed=1)
        assert not sampled.exhaustive
        assert sampled.mean_distance == pytest.approx(exact.mean_distance, rel=0.05)
        assert sampled.sampled_pairs == 2000
        assert sampled.ratio == pytest.approx(sampled.mean_distance / sampled.target)

    def test_pair_distances_match_python_bfs(self, small_graph):
        adj = adjacency_lists(small_graph)
        members = giant_members(small_graph)
        rng = np.random.default_rng(5)
        srcs = np.sort(rng.choice(members, 30))
        tgts = rng.choice(members, 30)
        got = _pair_distances(
            small_graph.indptr, small_graph.indices,
            srcs.astype(np.int64), tgts.astype(np.int64),
        )
        for s, t, dd in zip(srcs, tgts, got):
            assert bfs_distances_py(adj, int(s)).get(int(t), -1) == dd

    def test_bfs_metric_properties(self, small_graph):
        members = giant_members(small_graph)
        rng = np.random.default_rng(6)
        tri = rng.choice(members, size=(1000, 3))

        def dist(a, b):
            return _pair_distances(
                small_graph.indptr, small_graph.indices,
                np.array([a], dtype=np.int64), np.array([b], dtype=np.int64),
            )[0]

        for a, b, c in tri[:50]:
            dab, dba = dist(a, b), dist(b, a)
            assert dab == dba
            dbc, dac = dist(b, c), dist(a, c)
            if a != b and b != c and a != c:
                assert dac <= dab + dbc

    def test_target_formula(self):
        # independent high-precision evaluation: 7.576433946841756
        assert distance_target(10**6, 2.5) == pytest.approx(7.5764339, abs=1e-3)
        assert gl.distance_target(10**6, 2.5) == pytest.approx(
            2 * math.log(math.log(10**6)) / abs(math.log(0.5))
        )

    def test_requires_pairs_and_component(self):
        g = graph_from_edges(10, [])
        with pytest.raises(ValueError, match="fewer than 2"):
            gl.distance_report(g, n_pairs=10, seed=0)
        with pytest.raises(ValueError):
            gl.distance_report(path_graph(4), n_pairs=0, seed=0)
