"""Torus ground space [0,1)^d: distances, ball volumes, and their inverses.

Coordinate differences are always reduced modulo 1 to [-1/2, 1/2) before a
norm is applied.  Three norms are supported:

* ``max``            -- Chebyshev; V(r) = min(1, (2r)^d), exact everywhere.
* ``euclidean``      -- L2; exact for r <= 1/2 (V = vol_d r^d) and for d <= 2
                        everywhere; for d >= 3 the wrap-around regime
                        r in (1/2, sqrt(d)/2) uses a cached Monte Carlo table.
* ``min_component``  -- min_i |delta_i|; V(r) = 1 - (1 - min(1, 2r))^d, which
                        follows from coordinate independence (the complement
                        event is "every |delta_i| > r").  Not a metric for
                        d >= 2.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np


class Norm(Enum):
    MAX = "max"
    EUCLIDEAN = "euclidean"
    MIN_COMPONENT = "min_component"

    @classmethod
    def parse(cls, name: str) -> "Norm":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(n.value for n in cls)
            raise ValueError(f"unknown norm {name!r}; expected one of {valid}") from None


def unit_ball_volume(d: int) -> float:
    """Volume of the d-dimensional unit L2 ball."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def torus_diff(a, b) -> np.ndarray:
    """Per-coordinate differences a - b wrapped into [-1/2, 1/2)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    return (a - b + 0.5) % 1.0 - 0.5


def torus_gaps(a, b) -> np.ndarray:
    """Per-coordinate absolute torus gaps, exactly symmetric in a and b."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    g = np.abs(a - b) % 1.0
    return np.minimum(g, 1.0 - g)


def torus_distance(a, b, norm: Norm = Norm.MAX):
    """Distance between torus points under the given norm.

    Accepts single points or arrays of points (broadcasting over leading
    axes); the last axis is the coordinate axis.
    """
    delta = torus_gaps(a, b)
    if norm is Norm.MAX:
        out = delta.max(axis=-1)
    elif norm is Norm.EUCLIDEAN:
        out = np.sqrt((delta * delta).sum(axis=-1))
    elif norm is Norm.MIN_COMPONENT:
        out = delta.min(axis=-1)
    else:
        raise ValueError(f"unsupported norm {norm!r}")
    return float(out) if out.ndim == 0 else out


# --- ball volumes -----------------------------------------------------------

# Monte Carlo tables for the euclidean wrap-around regime, keyed by d.
# 10^7 fixed-seed samples per dimension; built lazily, immutable afterwards.
_MC_SAMPLES = 10_000_000
_MC_GRID = 512
_mc_tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _euclid_table(d: int) -> tuple[np.ndarray, np.ndarray]:
    tab = _mc_tables.get(d)
    if tab is not None:
        return tab
    r_hi = math.sqrt(d) / 2.0
    radii = np.linspace(0.5, r_hi, _MC_GRID)
    counts = np.zeros(_MC_GRID, dtype=np.int64)
    rng = np.random.default_rng(0xE0C11D + d)
    chunk = 1_000_000
    done = 0
    while done < _MC_SAMPLES:
        m = min(chunk, _MC_SAMPLES - done)
        pts = rng.random((m, d)) - 0.5
        norms = np.sqrt((pts * pts).sum(axis=1))
        counts += np.searchsorted(np.sort(norms), radii, side="right")
        done += m
    vols = counts / _MC_SAMPLES
    # pin the exact endpoints and force monotonicity
    vols[0] = unit_ball_volume(d) * 0.5**d
    vols[-1] = 1.0
    vols = np.maximum.accumulate(vols)
    _mc_tables[d] = (radii, vols)
    return _mc_tables[d]


def _euclid_volume_d2(r: np.ndarray) -> np.ndarray:
    # disc area on the unit 2-torus: subtract the four segments cut off by
    # the strip boundaries; corners stay disjoint up to r = sqrt(2)/2
    r = np.clip(r, 0.5, math.sqrt(2.0) / 2.0)
    seg = r * r * np.arccos(1.0 / (2.0 * r)) - 0.5 * np.sqrt(r * r - 0.25)
    return math.pi * r * r - 4.0 * seg


def ball_volume(r, d: int, norm: Norm = Norm.MAX):
    """Volume V(r) of the r-ball on the d-torus; scalar or array input."""
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < 0):
        raise ValueError("radius must be >= 0")
    if norm is Norm.MAX:
        out = np.minimum(1.0, (2.0 * r) ** d)
    elif norm is Norm.MIN_COMPONENT:
        out = 1.0 - (1.0 - np.minimum(1.0, 2.0 * r)) ** d
    elif norm is Norm.EUCLIDEAN:
        vol_d = unit_ball_volume(d)
        out = np.minimum(1.0, vol_d * r**d)
        if d == 2:
            mid = (r > 0.5) & (r < math.sqrt(2.0) / 2.0)
            if np.any(mid):
                out = np.where(mid, _euclid_volume_d2(r), out)
            out = np.where(r >= math.sqrt(2.0) / 2.0, 1.0, out)
        elif d >= 3:
            mid = (r > 0.5) & (r < math.sqrt(d) / 2.0)
            if np.any(mid):
                radii, vols = _euclid_table(d)
                out = np.where(mid, np.interp(r, radii, vols), out)
            out = np.where(r >= math.sqrt(d) / 2.0, 1.0, out)
        # d == 1: vol_1 * r = 2r, already exact and clamped
    else:
        raise ValueError(f"unsupported norm {norm!r}")
    return float(out) if out.ndim == 0 else out


def max_distance(d: int, norm: Norm) -> float:
    """Largest attainable distance on the torus (where V first reaches 1)."""
    if norm is Norm.EUCLIDEAN:
        return math.sqrt(d) / 2.0
    return 0.5


def inverse_volume(v: float, d: int, norm: Norm = Norm.MAX) -> float:
    """Smallest r with ball_volume(r, d, norm) >= v.

    Closed form for max / min_component and for the euclidean core regime;
    bisection to 1e-12 otherwise.
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError("volume must lie in [0, 1]")
    if v == 0.0:
        return 0.0
    if norm is Norm.MAX:
        return 0.5 * v ** (1.0 / d)
    if norm is Norm.MIN_COMPONENT:
        return 0.5 * (1.0 - (1.0 - v) ** (1.0 / d))
    vol_d = unit_ball_volume(d)
    r_core = (v / vol_d) ** (1.0 / d)
    if r_core <= 0.5:
        return r_core
    lo, hi = 0.5, math.sqrt(d) / 2.0
    if v >= 1.0:
        return hi
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if ball_volume(mid, d, norm) >= v:
            hi = mid
        else:
            lo = mid
    return hi


# --- position sampling and file I/O -----------------------------------------


def sample_positions(n: int, d: int, seed: int) -> np.ndarray:
    """n i.i.d. uniform points in [0,1)^d; deterministic for a fixed seed."""
    return np.random.default_rng(seed).random((n, d))


def write_positions(positions: np.ndarray, fh) -> None:
    for row in positions:
        fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def read_positions(fh, n: int, d: int, path="<positions>", line0: int = 0) -> np.ndarray:
    out = np.empty((n, d), dtype=np.float64)
    for i in range(n):
        line = fh.readline()
        if not line:
            raise ValueError(f"{path}: line {line0 + i + 1}: expected {n} position rows")
        parts = line.split()
        if len(parts) != d:
            raise ValueError(f"{path}: line {line0 + i + 1}: expected {d} coordinates")
        out[i] = [float(p) for p in parts]
    if np.any(out < 0.0) or np.any(out >= 1.0):
        raise ValueError(f"{path}: coordinates must lie in [0, 1)")
    return out
