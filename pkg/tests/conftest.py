"""Shared fixtures and independent oracles for the test suite.

The n=1e5 graphs used by several acceptance criteria are generated once per
session and cached; every criterion then measures its own analysis work.
Oracles here (BFS, pair counting) are deliberately written in plain python,
independent of the library's numba/scipy code paths.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache

import numpy as np
import pytest

import girglab as gl

ACCEPT_N = 100_000
ACCEPT_BETA = 2.5

# the four kernels the acceptance criteria run
ACCEPT_KERNELS = {
    "chung_lu": (gl.ChungLu(), 1, "naive"),
    "distance_d1_max": (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX), 1, "grid"),
    "distance_d2_min": (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MIN_COMPONENT), 2, "grid"),
    "threshold_d2": (gl.ThresholdKernel(norm=gl.Norm.MAX), 2, "grid"),
}


@lru_cache(maxsize=None)
def suite_graph(kernel_key: str, seed: int) -> gl.Graph:
    """One n=1e5 graph of the acceptance suite, cached for the session."""
    kernel, d, sampler = ACCEPT_KERNELS[kernel_key]
    config = gl.ModelConfig(
        n=ACCEPT_N, beta=ACCEPT_BETA, d=d, kernel=kernel, seed=seed, sampler=sampler
    )
    return gl.generate(config)


@lru_cache(maxsize=None)
def fixed_weights_graphs(n_seeds: int = 20):
    """ChungLu graphs over one fixed weight sequence, fresh edges per seed."""
    ws = gl.sample_weights(ACCEPT_N, ACCEPT_BETA, seed=424242)
    graphs = []
    for s in range(n_seeds):
        config = gl.ModelConfig(
            n=ACCEPT_N, beta=ACCEPT_BETA, d=1, kernel=gl.ChungLu(), seed=s, sampler="naive"
        )
        graphs.append(gl.generate_naive(config, ws))
    return ws, graphs


@pytest.fixture(scope="session")
def small_graph():
    """A small connected-ish sampled graph for structural property tests."""
    config = gl.ModelConfig(n=500, beta=2.5, d=2, kernel=gl.ChungLu(), seed=17)
    return gl.generate(config)


# --- independent oracles ------------------------------------------------------


def adjacency_lists(graph: gl.Graph) -> list[list[int]]:
    return [list(map(int, graph.neighbors(v))) for v in range(graph.n)]


def bfs_distances_py(adj: list[list[int]], src: int) -> dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for x in adj[u]:
            if x not in dist:
                dist[x] = dist[u] + 1
                queue.append(x)
    return dist


def components_py(adj: list[list[int]]) -> list[int]:
    n = len(adj)
    label = [-1] * n
    cur = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = cur
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for x in adj[u]:
                if label[x] < 0:
                    label[x] = cur
                    queue.append(x)
        cur += 1
    return label


def edge_list(graph: gl.Graph) -> list[tuple[int, int]]:
    rows = np.repeat(np.arange(graph.n), graph.degrees)
    fwd = rows < graph.indices
    return list(zip(rows[fwd].tolist(), graph.indices[fwd].tolist()))


def graph_from_edges(n: int, edges, d: int = 1, beta: float = 2.5) -> gl.Graph:
    """Hand-built graph with a synthetic strictly-decreasing weight sequence."""
    vals = np.linspace(10.0, 1.0, n)
    ws = gl.WeightSequence(vals, w_bar=vals[0] + 1.0, beta=beta)
    eu = np.array([min(e) for e in edges], dtype=np.int32)
    ev = np.array([max(e) for e in edges], dtype=np.int32)
    from girglab.sampler import build_graph

    pos = np.random.default_rng(0).random((n, d))
    return build_graph(n, d, eu, ev, ws, pos, {"sampler": "manual"})
