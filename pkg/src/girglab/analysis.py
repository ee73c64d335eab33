"""Structural measurements: degrees, components, heavy core, paths, distances.

All measurements are read-only over an immutable :class:`~girglab.sampler.Graph`
and deterministic for a fixed seed.  Vertices are ordered by non-increasing
weight, so the heavy core (weight >= w_bar) is always the id prefix
[0, core_size).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .sampler import Graph


def distance_target(n: int, beta: float) -> float:
    """2 ln ln n / |ln(beta - 2)|, the ultra-small-world reference value."""
    if n <= 3:
        raise ValueError("n too small for a log-log target")
    return 2.0 * math.log(math.log(n)) / abs(math.log(beta - 2.0))


# --- degrees -----------------------------------------------------------------


@dataclass(frozen=True)
class DegreeReport:
    ccdf: np.ndarray  # ccdf[d] = #{v : deg(v) >= d}, d = 0..max_degree
    max_degree: int
    mean_degree: float
    fitted_slope: float
    slope_stderr: float
    fit_lo: int
    fit_hi: int

    def ccdf_at(self, d: int) -> int:
        return int(self.ccdf[d]) if d < self.ccdf.size else 0

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("d,count\n")
            for d, c in enumerate(self.ccdf):
                fh.write(f"{d},{c}\n")


def degree_report(graph: Graph, fit_range: tuple[int, int] = (5, 100)) -> DegreeReport:
    """Exact degree CCDF plus a log-log least-squares slope over fit_range."""
    d_lo, d_hi = fit_range
    if d_lo < 1 or d_hi <= d_lo:
        raise ValueError("need 1 <= d_lo < d_hi")
    if graph.n == 0:
        raise ValueError("empty graph")
    degrees = graph.degrees
    counts = np.bincount(degrees)
    cum_lt = np.concatenate(([0], np.cumsum(counts[:-1])))
    ccdf = graph.n - cum_lt

    ds = np.arange(max(1, d_lo), min(d_hi, ccdf.size - 1) + 1)
    ds = ds[ccdf[ds] > 0]
    if ds.size < 2:
        raise ValueError(f"fewer than two usable CCDF points in [{d_lo}, {d_hi}]")
    x = np.log(ds.astype(np.float64))
    y = np.log(ccdf[ds].astype(np.float64))
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    resid = y - y.mean() - slope * xc
    dof = max(1, x.size - 2)
    stderr = math.sqrt(float(resid @ resid) / dof / sxx)
    return DegreeReport(
        ccdf=ccdf,
        max_degree=int(degrees.max(initial=0)),
        mean_degree=float(2.0 * graph.edge_count / graph.n),
        fitted_slope=slope,
        slope_stderr=stderr,
        fit_lo=d_lo,
        fit_hi=d_hi,
    )


# --- connected components ----------------------------------------------------


@dataclass(frozen=True)
class ComponentReport:
    component_ids: np.ndarray
    sizes: np.ndarray  # sorted descending
    giant_fraction: float
    second_size: int

    @property
    def count(self) -> int:
        return self.sizes.size


def components(graph: Graph) -> ComponentReport:
    from scipy.sparse.csgraph import connected_components

    _, labels = connected_components(graph.to_scipy(), directed=False)
    sizes = np.sort(np.bincount(labels))[::-1]
    return ComponentReport(
        component_ids=labels,
        sizes=sizes,
        giant_fraction=float(sizes[0] / graph.n),
        second_size=int(sizes[1]) if sizes.size > 1 else 0,
    )


def giant_members(graph: Graph, report: ComponentReport | None = None) -> np.ndarray:
    rep = report if report is not None else components(graph)
    giant_label = int(np.argmax(np.bincount(rep.component_ids)))
    return np.flatnonzero(rep.component_ids == giant_label)


# --- heavy core --------------------------------------------------------------


@dataclass(frozen=True)
class CoreReport:
    core_vertices: int
    core_connected: bool
    core_diameter: int  # -1 when the core is disconnected


def core_report(graph: Graph) -> CoreReport:
    """Induce the subgraph of vertices with weight >= w_bar and measure it.

    The core is small (polylog-size for the default threshold), so the exact
    diameter via all-pairs BFS is affordable.
    """
    from scipy.sparse.csgraph import connected_components, shortest_path

    k = graph.weights.heavy_count()
    if k == 0:
        raise ValueError("heavy core is empty (no weight reaches w_bar)")
    # vertices are sorted by weight, so the core is the id prefix [0, k)
    sub_indptr = np.zeros(k + 1, dtype=np.int64)
    sub_indices = []
    for v in range(k):
        nbrs = graph.neighbors(v)
        core_nbrs = nbrs[nbrs < k]
        sub_indices.append(core_nbrs)
        sub_indptr[v + 1] = sub_indptr[v] + core_nbrs.size
    idx = np.concatenate(sub_indices) if sub_indices else np.empty(0, np.int32)

    from scipy.sparse import csr_matrix

    sub = csr_matrix((np.ones(idx.size, np.int8), idx, sub_indptr), shape=(k, k))
    n_comp, _ = connected_components(sub, directed=False)
    if n_comp > 1:
        return CoreReport(core_vertices=k, core_connected=False, core_diameter=-1)
    if k == 1:
        return CoreReport(core_vertices=1, core_connected=True, core_diameter=0)
    dist = shortest_path(sub, method="D", directed=False, unweighted=True)
    return CoreReport(core_vertices=k, core_connected=True, core_diameter=int(dist.max()))


# --- greedy walk to the core ---------------------------------------------------


def greedy_path(graph: Graph, v: int) -> tuple[list[int], bool]:
    """Walk to the strictly heaviest neighbor until the core is reached.

    Stops when the best neighbor is not strictly heavier (so the weight
    sequence along the path increases strictly and no vertex repeats), or
    after ~10 ln ln n steps as a guard on degenerate inputs.
    """
    if not 0 <= v < graph.n:
        raise ValueError(f"vertex {v} out of range")
    w = graph.weights.values
    w_bar = graph.weights.w_bar
    cap = max(4, math.ceil(10.0 * math.log(max(math.log(max(graph.n, 3)), 1.1))))
    path = [int(v)]
    cur = int(v)
    while True:
        if w[cur] >= w_bar:
            return path, True
        if len(path) - 1 >= cap:
            return path, False
        nbrs = graph.neighbors(cur)
        if nbrs.size == 0:
            return path, False
        # ids are sorted by descending weight: first max is the smallest id
        best = int(nbrs[np.argmax(w[nbrs])])
        if w[best] <= w[cur]:
            return path, False
        path.append(best)
        cur = best


# --- weight-restricted neighborhoods -----------------------------------------


def _gather_neighbors(indptr, indices, frontier):
    counts = indptr[frontier + 1] - indptr[frontier]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype)
    out = np.empty(total, dtype=np.int64)
    pos = 0
    for u, c in zip(frontier, counts):
        out[pos : pos + c] = indices[indptr[u] : indptr[u] + c]
        pos += c
    return out


def restricted_neighborhood(
    graph: Graph, v: int, w: float, k: int
) -> tuple[np.ndarray, bool]:
    """Vertices within k hops of v using only vertices of weight < w.

    v itself always counts.  ``hit_heavy`` reports whether any reached vertex
    has a full-graph neighbor of weight >= w.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    vals = graph.weights.values
    allowed = vals < w
    visited = np.zeros(graph.n, dtype=bool)
    visited[v] = True
    frontier = np.array([v], dtype=np.int64)
    depth = 0
    while frontier.size and depth < k:
        nxt = _gather_neighbors(graph.indptr, graph.indices, frontier)
        nxt = np.unique(nxt)
        nxt = nxt[allowed[nxt] & ~visited[nxt]]
        visited[nxt] = True
        frontier = nxt
        depth += 1
    members = np.flatnonzero(visited)

    if members.size:
        maxw = np.full(graph.n, -np.inf)
        deg = graph.degrees
        nonzero = deg > 0
        if np.any(nonzero):
            red = np.maximum.reduceat(vals[graph.indices], graph.indptr[:-1][nonzero])
            maxw[nonzero] = red
        hit_heavy = bool(np.any(maxw[members] >= w))
    else:
        hit_heavy = False
    return members, hit_heavy


# --- pairwise distances --------------------------------------------------------


@njit(cache=True)
def _pair_distances(indptr, indices, srcs, tgts):
    """BFS distance for each (srcs[i], tgts[i]); srcs must be sorted.

    Runs one BFS per distinct source with early exit once every target of
    that source has been seen.  Returns -1 for unreachable targets.
    """
    n = indptr.shape[0] - 1
    out = np.full(srcs.shape[0], -1, np.int32)
    mark = np.zeros(n, np.int64)
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    epoch = 0
    i = 0
    while i < srcs.shape[0]:
        j = i + 1
        while j < srcs.shape[0] and srcs[j] == srcs[i]:
            j += 1
        epoch += 1
        s = srcs[i]
        need = 0
        for t in range(i, j):
            if tgts[t] == s:
                out[t] = 0
            else:
                need += 1
        mark[s] = epoch
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail and need > 0:
            u = queue[head]
            head += 1
            du = dist[u]
            for e in range(indptr[u], indptr[u + 1]):
                x = indices[e]
                if mark[x] != epoch:
                    mark[x] = epoch
                    dist[x] = du + 1
                    queue[tail] = x
                    tail += 1
                    for t in range(i, j):
                        if tgts[t] == x and out[t] < 0:
                            out[t] = du + 1
                            need -= 1
        i = j
    return out


@njit(cache=True)
def _bfs_eccentricity(indptr, indices, src, dist, queue):
    n = indptr.shape[0] - 1
    for v in range(n):
        dist[v] = -1
    dist[src] = 0
    queue[0] = src
    head, tail = 0, 1
    far = src
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for e in range(indptr[u], indptr[u + 1]):
            x = indices[e]
            if dist[x] < 0:
                dist[x] = du + 1
                queue[tail] = x
                tail += 1
                far = x
    return far, dist[far]


@njit(cache=True)
def _double_sweep(indptr, indices, starts):
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    best = 0
    for s in starts:
        far, ecc = _bfs_eccentricity(indptr, indices, s, dist, queue)
        if ecc > best:
            best = ecc
        far2, ecc2 = _bfs_eccentricity(indptr, indices, far, dist, queue)
        if ecc2 > best:
            best = ecc2
    return best


@njit(cache=True)
def _exhaustive_pair_stats(indptr, indices, members):
    """Sum and sum of squares of distances over unordered member pairs."""
    n = indptr.shape[0] - 1
    in_set = np.zeros(n, np.uint8)
    for v in members:
        in_set[v] = 1
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    total = 0.0
    total2 = 0.0
    cnt = 0
    for idx in range(members.shape[0]):
        s = members[idx]
        for v in range(n):
            dist[v] = -1
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for e in range(indptr[u], indptr[u + 1]):
                x = indices[e]
                if dist[x] < 0:
                    dist[x] = du + 1
                    queue[tail] = x
                    tail += 1
        for v in members[idx + 1 :]:
            dv = dist[v]
            if dv >= 0:
                total += dv
                total2 += dv * dv
                cnt += 1
    return total, total2, cnt


@dataclass(frozen=True)
class DistanceReport:
    sampled_pairs: int
    mean_distance: float
    stderr: float
    target: float
    ratio: float
    diameter_estimate: int  # lower bound from double-sweep BFS
    exhaustive: bool


def distance_report(graph: Graph, n_pairs: int, seed: int = 0, sweeps: int = 32) -> DistanceReport:
    """Mean BFS distance over uniform random pairs from the largest component.

    If n_pairs covers all distinct pairs of the component, every pair is used
    exactly once and the mean is exact (stderr 0).  The diameter estimate is
    the maximum eccentricity seen by double-sweep BFS from ``sweeps`` random
    starts, a lower bound on the true diameter.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    if graph.weights.beta is None:
        raise ValueError("weight sequence carries no beta; cannot form the target")
    members = giant_members(graph)
    size = members.size
    if size < 2:
        raise ValueError("largest component has fewer than 2 vertices")
    target = distance_target(graph.n, graph.weights.beta)
    rng = np.random.default_rng(seed)

    total_pairs = size * (size - 1) // 2
    if n_pairs >= total_pairs:
        s, s2, cnt = _exhaustive_pair_stats(graph.indptr, graph.indices, members.astype(np.int64))
        mean = s / cnt
        stderr = 0.0
        used = int(cnt)
        exhaustive = True
    else:
        srcs = members[rng.integers(0, size, n_pairs)]
        tgts = members[rng.integers(0, size, n_pairs)]
        clash = srcs == tgts
        while np.any(clash):
            tgts[clash] = members[rng.integers(0, size, int(clash.sum()))]
            clash = srcs == tgts
        order = np.argsort(srcs, kind="stable")
        srcs, tgts = srcs[order], tgts[order]
        dists = _pair_distances(
            graph.indptr, graph.indices, srcs.astype(np.int64), tgts.astype(np.int64)
        )
        dd = dists.astype(np.float64)
        mean = float(dd.mean())
        stderr = float(dd.std(ddof=1) / math.sqrt(dd.size)) if dd.size > 1 else 0.0
        used = int(dd.size)
        exhaustive = False

    starts = rng.choice(members, size=min(sweeps, size), replace=False).astype(np.int64)
    diam_lb = int(_double_sweep(graph.indptr, graph.indices, starts))
    return DistanceReport(
        sampled_pairs=used,
        mean_distance=float(mean),
        stderr=stderr,
        target=target,
        ratio=float(mean / target),
        diameter_estimate=diam_lb,
        exhaustive=exhaustive,
    )
