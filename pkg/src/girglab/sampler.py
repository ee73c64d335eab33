"""Graph generation: model configuration, the exact naive sampler, file I/O.

A model run is fully described by a :class:`ModelConfig`.  Its single seed is
split into independent sub-seeds (weights, positions, pair draws, skip
streams) through :func:`girglab.pairrng.mix64`, and every edge decision is
keyed by (pair_seed, u, v), so a config determines the output graph exactly,
no matter how pair evaluation is ordered or partitioned.

Vertices are numbered 0..n-1 in order of non-increasing weight.

``generate_naive`` evaluates every unordered pair; it is the reference
implementation the bucketed grid sampler is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from . import _evalnb, geometry
from ._evalnb import KIND_CHUNG_LU, kernel_params
from .geometry import read_positions, write_positions
from .kernels import ChungLu, KernelKind, kernel_label, supports_grid
from .pairrng import _U64, mix64, nb_pair_uniform
from .weights import WeightSequence, sample_weights

MAX_N = 2**31 - 1

GRAPH_HEADER = "# girg-lab v1"


@dataclass(frozen=True)
class ModelConfig:
    """Everything needed to reproduce one random graph."""

    n: int
    beta: float
    w_min: float = 1.0
    d: int = 1
    kernel: KernelKind = ChungLu()
    seed: int = 0
    sampler: str = "naive"
    w_bar: float | None = None

    def __post_init__(self):
        if not 2 <= self.n <= MAX_N:
            raise ValueError(f"n must lie in [2, {MAX_N}]")
        if not (2.0 < self.beta < 3.0):
            raise ValueError("beta must lie in (2, 3)")
        if self.w_min <= 0.0:
            raise ValueError("w_min must be positive")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.sampler not in ("naive", "grid"):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if self.sampler == "grid" and not supports_grid(self.kernel):
            raise ValueError(
                "grid sampler supports only distance (alpha > 1) and threshold "
                "kernels with max or min_component norm"
            )

    @property
    def weights_seed(self) -> int:
        return mix64(self.seed, 1)

    @property
    def positions_seed(self) -> int:
        return mix64(self.seed, 2)

    @property
    def pair_seed(self) -> int:
        return mix64(self.seed, 3)

    @property
    def skip_seed(self) -> int:
        return mix64(self.seed, 4)

    def sample_weights(self) -> WeightSequence:
        return sample_weights(self.n, self.beta, self.w_min, seed=self.weights_seed, w_bar=self.w_bar)

    def sample_positions(self) -> np.ndarray:
        return geometry.sample_positions(self.n, self.d, self.positions_seed)

    def label(self) -> str:
        return kernel_label(self.kernel, self.d)


@dataclass(eq=False)
class Graph:
    """Immutable simple undirected graph in CSR adjacency form."""

    n: int
    d: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: WeightSequence
    positions: np.ndarray
    edge_count: int
    meta: dict = field(default_factory=dict)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def to_scipy(self):
        from scipy.sparse import csr_matrix

        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def validate(self) -> None:
        """Check structural invariants; raises ValueError on violation."""
        if self.indptr[0] != 0 or self.indptr[-1] != self.indices.size:
            raise ValueError("bad indptr bounds")
        if self.indices.size != 2 * self.edge_count:
            raise ValueError("edge_count inconsistent with adjacency size")
        for v in range(self.n):
            nbrs = self.neighbors(v)
            if nbrs.size == 0:
                continue
            if np.any(nbrs == v):
                raise ValueError(f"self loop at {v}")
            if np.any(np.diff(nbrs) <= 0):
                raise ValueError(f"unsorted or duplicate neighbors at {v}")
        # symmetry via sorted edge multisets
        rows = np.repeat(np.arange(self.n), self.degrees)
        fwd = rows < self.indices
        a = np.stack((rows[fwd], self.indices[fwd]))
        bwd = rows > self.indices
        b = np.stack((self.indices[bwd], rows[bwd]))
        if a.shape != b.shape or not np.array_equal(
            a[:, np.lexsort(a[::-1])], b[:, np.lexsort(b[::-1])]
        ):
            raise ValueError("adjacency is not symmetric")


def build_graph(
    n: int,
    d: int,
    eu: np.ndarray,
    ev: np.ndarray,
    weights: WeightSequence,
    positions: np.ndarray,
    meta: dict | None = None,
) -> Graph:
    """Assemble CSR adjacency from unordered edge endpoint arrays (u < v)."""
    rows = np.concatenate((eu, ev))
    cols = np.concatenate((ev, eu))
    order = np.lexsort((cols, rows))
    indices = np.ascontiguousarray(cols[order], dtype=np.int32)
    counts = np.bincount(rows, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return Graph(
        n=n,
        d=d,
        indptr=indptr,
        indices=indices,
        weights=weights,
        positions=positions,
        edge_count=int(eu.size),
        meta=meta or {},
    )


@njit(inline="always", cache=True)
def _naive_row(
    u, w, pos, invW, kind, norm, d, alpha, expo, c_low, c_high, vol_const,
    tab_r, tab_v, pair_seed, ptr0, ptr_end, out_u, out_v,
):
    # writes edges into out[ptr0:ptr_end] while room; always returns the
    # true count so an undersized buffer is detected, not silently dropped
    n = w.shape[0]
    ptr = ptr0
    cnt = 0
    if kind == KIND_CHUNG_LU:
        wu = w[u] * invW
        for v in range(u + 1, n):
            p = wu * w[v]
            if p >= 1.0 or nb_pair_uniform(pair_seed, u, v) < p:
                if ptr < ptr_end:
                    out_u[ptr] = u
                    out_v[ptr] = v
                    ptr += 1
                cnt += 1
    else:
        for v in range(u + 1, n):
            p = _evalnb.edge_prob_pair(
                pos, u, v, w, invW, kind, norm, d, alpha, expo,
                c_low, c_high, vol_const, tab_r, tab_v,
            )
            if p >= 1.0 or (p > 0.0 and nb_pair_uniform(pair_seed, u, v) < p):
                if ptr < ptr_end:
                    out_u[ptr] = u
                    out_v[ptr] = v
                    ptr += 1
                cnt += 1
    return cnt


@njit(cache=True, parallel=True)
def _naive_pass(
    w, pos, invW, kind, norm, d, alpha, expo, c_low, c_high, vol_const,
    tab_r, tab_v, pair_seed, row_off, out_u, out_v,
):
    n = w.shape[0]
    counts = np.zeros(n, np.int64)
    # pair row uu with row n-2-uu so every prange chunk carries ~equal pair
    # counts; a plain row range would put most of the work in the first chunk
    half = n // 2
    for uu in prange(half):
        counts[uu] = _naive_row(
            uu, w, pos, invW, kind, norm, d, alpha, expo, c_low, c_high,
            vol_const, tab_r, tab_v, pair_seed, row_off[uu], row_off[uu + 1],
            out_u, out_v,
        )
        u2 = n - 2 - uu
        if u2 != uu:
            counts[u2] = _naive_row(
                u2, w, pos, invW, kind, norm, d, alpha, expo, c_low, c_high,
                vol_const, tab_r, tab_v, pair_seed, row_off[u2], row_off[u2 + 1],
                out_u, out_v,
            )
    return counts


def _ragged_arange(counts: np.ndarray) -> np.ndarray:
    """[0..counts[0]), [0..counts[1]), ... concatenated."""
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    seg_starts = np.repeat(np.cumsum(counts) - counts, counts)
    return np.arange(total, dtype=np.int64) - seg_starts


def generate_naive(config: ModelConfig, weights: WeightSequence | None = None) -> Graph:
    """Reference sampler: evaluates every unordered pair exactly once."""
    if weights is None:
        weights = config.sample_weights()
    if len(weights) != config.n:
        raise ValueError(f"weight sequence has {len(weights)} entries, config.n = {config.n}")
    positions = config.sample_positions()
    kind, norm, alpha, expo, c_low, c_high, vol_const, tab_r, tab_v = kernel_params(
        config.kernel, config.d
    )
    w = weights.values
    invW = 1.0 / weights.total
    pair_seed = _U64(config.pair_seed)

    # one pass with generous per-row buffers (expected row degree is O(w_u));
    # on the rare overflow, rerun with exact offsets from the true counts
    caps = 64 + 8 * np.ceil(w).astype(np.int64)
    row_off = np.zeros(config.n + 1, dtype=np.int64)
    np.cumsum(caps, out=row_off[1:])
    eu = np.empty(row_off[-1], dtype=np.int32)
    ev = np.empty(row_off[-1], dtype=np.int32)
    counts = _naive_pass(
        w, positions, invW, kind, norm, config.d, alpha, expo, c_low, c_high,
        vol_const, tab_r, tab_v, pair_seed, row_off, eu, ev,
    )
    if np.any(counts > caps):
        row_off = np.zeros(config.n + 1, dtype=np.int64)
        np.cumsum(counts, out=row_off[1:])
        eu = np.empty(row_off[-1], dtype=np.int32)
        ev = np.empty(row_off[-1], dtype=np.int32)
        counts = _naive_pass(
            w, positions, invW, kind, norm, config.d, alpha, expo, c_low, c_high,
            vol_const, tab_r, tab_v, pair_seed, row_off, eu, ev,
        )
    keep = np.repeat(row_off[:-1], counts) + _ragged_arange(counts)
    eu = eu[keep]
    ev = ev[keep]
    m = int(counts.sum())
    meta = {
        "sampler": "naive",
        "candidates": config.n * (config.n - 1) // 2,
        "kernel": config.label(),
        "seed": config.seed,
        "beta": config.beta,
    }
    return build_graph(config.n, config.d, eu, ev, weights, positions, meta)


def generate_grid(config: ModelConfig, weights: WeightSequence | None = None) -> Graph:
    from .gridding import generate_grid as _gg

    return _gg(config, weights)


def generate(config: ModelConfig, weights: WeightSequence | None = None) -> Graph:
    """Dispatch on config.sampler."""
    if config.sampler == "grid":
        return generate_grid(config, weights)
    return generate_naive(config, weights)


# --- graph file format -------------------------------------------------------
#
#   # girg-lab v1 n=<n> m=<m> d=<d>
#   <m lines "u v" with u < v, sorted>
#   # weights
#   <weight file: header plus n lines>
#   # positions
#   <n lines of d space-separated coordinates in [0,1)>


def write_graph(graph: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{GRAPH_HEADER} n={graph.n} m={graph.edge_count} d={graph.d}\n")
        rows = np.repeat(np.arange(graph.n), graph.degrees)
        fwd = rows < graph.indices
        for u, v in zip(rows[fwd], graph.indices[fwd]):
            fh.write(f"{u} {v}\n")
        fh.write("# weights\n")
        ws = graph.weights
        beta = ws.beta if ws.beta is not None else float("nan")
        wmin = ws.w_min_param if ws.w_min_param is not None else ws.w_min
        seed = ws.seed if ws.seed is not None else -1
        fh.write(f"# n={len(ws)} beta={beta!r} wmin={wmin!r} seed={seed}\n")
        for x in ws.values:
            fh.write(repr(float(x)) + "\n")
        fh.write("# positions\n")
        write_positions(graph.positions, fh)


def read_graph(path, w_bar: float | None = None) -> Graph:
    """Read a graph file; raises ValueError with a line number on bad input."""
    from .weights import _parse_header, default_w_bar

    with open(path) as fh:
        header = fh.readline()
        lineno = 1
        if not header.startswith(GRAPH_HEADER):
            raise ValueError(f"{path}: line 1: not a girg-lab v1 graph file")
        try:
            fields = dict(tok.split("=", 1) for tok in header.split()[3:])
            n, m, d = int(fields["n"]), int(fields["m"]), int(fields["d"])
        except (KeyError, ValueError):
            raise ValueError(f"{path}: line 1: malformed graph header") from None
        eu = np.empty(m, dtype=np.int32)
        ev = np.empty(m, dtype=np.int32)
        for i in range(m):
            line = fh.readline()
            lineno += 1
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 'u v'")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad vertex ids") from None
            if not (0 <= a < b < n):
                raise ValueError(f"{path}: line {lineno}: edge {a} {b} out of range")
            eu[i], ev[i] = a, b
        lineno += 1
        if fh.readline().strip() != "# weights":
            raise ValueError(f"{path}: line {lineno}: expected '# weights'")
        wheader = fh.readline()
        lineno += 1
        meta = _parse_header(wheader, path)
        if meta["n"] != n:
            raise ValueError(f"{path}: line {lineno}: weight count differs from n")
        vals = np.empty(n, dtype=np.float64)
        for i in range(n):
            line = fh.readline()
            lineno += 1
            try:
                vals[i] = float(line)
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad weight") from None
        beta = None if math.isnan(meta["beta"]) else meta["beta"]
        if w_bar is None:
            w_bar = default_w_bar(n, beta) if beta is not None else float(vals[0])
        seed = meta["seed"] if meta["seed"] >= 0 else None
        ws = WeightSequence(vals, w_bar, beta=beta, w_min_param=meta["wmin"], seed=seed)
        lineno += 1
        if fh.readline().strip() != "# positions":
            raise ValueError(f"{path}: line {lineno}: expected '# positions'")
        positions = read_positions(fh, n, d, path=path, line0=lineno)
    return build_graph(n, d, eu, ev, ws, positions, {"sampler": "file"})
