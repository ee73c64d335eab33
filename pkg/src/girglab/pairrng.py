"""Deterministic counter-based randomness for reproducible graph sampling.

All randomness that decides individual edges is *keyed*: the Bernoulli draw
for an unordered vertex pair {u, v} is a pure function of (seed, u, v),
obtained by pushing the packed pair index through a SplitMix64-style
avalanche finalizer.  Edge outcomes therefore do not depend on the order in
which pairs are enumerated, which lets the naive and the grid sampler agree
on shared candidate pairs, and lets generation be partitioned arbitrarily
across workers without changing the output graph.

The module also provides ``mix64``, the published mixing function used to
derive sub-seeds (weights / positions / pair draws / skip streams) and
per-cell experiment seeds:

    h = 0x2545F4914F6CDD1D
    for each part p:  h = fmix64((h * 0x9E3779B97F4A7C15) XOR p)   (mod 2^64)

where ``fmix64`` is the SplitMix64 finalizer
(x ^= x>>30; x *= 0xBF58476D1CE4E5B9; x ^= x>>27; x *= 0x94D049BB133111EB;
x ^= x>>31).
"""

from __future__ import annotations

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX_C1 = 0xBF58476D1CE4E5B9
MIX_C2 = 0x94D049BB133111EB
MIX_INIT = 0x2545F4914F6CDD1D

# 2^-53; a 53-bit mantissa drawn from the high bits maps to [0, 1)
_INV_2_53 = 2.0 ** -53

_U64 = np.uint64
_G = _U64(GAMMA)
_C1 = _U64(MIX_C1)
_C2 = _U64(MIX_C2)


def fmix64(x: int) -> int:
    """SplitMix64 finalizer on python ints (mod 2^64)."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * MIX_C1) & MASK64
    x = ((x ^ (x >> 27)) * MIX_C2) & MASK64
    return x ^ (x >> 31)


def mix64(*parts: int) -> int:
    """Fold any number of integers into one 64-bit value.

    Used for seed derivation everywhere: sub-stream seeds of a model seed,
    per-cell experiment seeds, skip-stream seeds of the grid sampler.
    """
    h = MIX_INIT
    for p in parts:
        h = fmix64(((h * GAMMA) & MASK64) ^ (p & MASK64))
    return h


def pair_uniform(pair_seed: int, u: int, v: int) -> float:
    """Uniform in [0, 1) keyed by (pair_seed, {u, v}).

    Symmetric in u, v; requires 0 <= u, v < 2^31 and u != v.
    """
    if u > v:
        u, v = v, u
    k = (u << 32) | v
    h = fmix64(((k * GAMMA) & MASK64) ^ (pair_seed & MASK64))
    return (h >> 11) * _INV_2_53


def pair_uniform_array(pair_seed: int, u, v) -> np.ndarray:
    """Vectorized ``pair_uniform`` over arrays of vertex ids."""
    u = np.asarray(u, dtype=np.uint64)
    v = np.asarray(v, dtype=np.uint64)
    a = np.minimum(u, v)
    b = np.maximum(u, v)
    k = (a << _U64(32)) | b
    h = (k * _G) ^ _U64(pair_seed & MASK64)
    h = (h ^ (h >> _U64(30))) * _C1
    h = (h ^ (h >> _U64(27))) * _C2
    h = h ^ (h >> _U64(31))
    return (h >> _U64(11)).astype(np.float64) * _INV_2_53


@njit(inline="always", cache=True)
def nb_fmix64(x):
    x = (x ^ (x >> _U64(30))) * _C1
    x = (x ^ (x >> _U64(27))) * _C2
    return x ^ (x >> _U64(31))


@njit(inline="always", cache=True)
def nb_pair_uniform(pair_seed, u, v):
    # pair_seed: uint64, u < v assumed (callers canonicalize)
    k = (_U64(u) << _U64(32)) | _U64(v)
    h = nb_fmix64((k * _G) ^ pair_seed)
    return (h >> _U64(11)) * _INV_2_53


@njit(inline="always", cache=True)
def nb_stream_next(state):
    """One SplitMix64 step: returns (uniform in [0,1), new state)."""
    state = state + _G
    h = nb_fmix64(state)
    return (h >> _U64(11)) * _INV_2_53, state
