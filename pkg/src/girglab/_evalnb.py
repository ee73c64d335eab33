"""Numba-compiled per-pair evaluation shared by the naive and grid samplers.

Both samplers must agree bit-for-bit on the probability assigned to a pair,
so the torus distance, ball volume and kernel formulas live here in a single
njit implementation.  Kernels are encoded as flat scalars:

    kind: 0 = chung_lu, 1 = distance, 2 = threshold
    norm: 0 = max, 1 = euclidean, 2 = min_component
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from . import geometry
from .geometry import Norm
from .kernels import ChungLu, DistanceKernel, KernelKind, ThresholdKernel

KIND_CHUNG_LU = 0
KIND_DISTANCE = 1
KIND_THRESHOLD = 2

NORM_MAX = 0
NORM_EUCLIDEAN = 1
NORM_MIN_COMPONENT = 2

_NORM_CODE = {Norm.MAX: NORM_MAX, Norm.EUCLIDEAN: NORM_EUCLIDEAN, Norm.MIN_COMPONENT: NORM_MIN_COMPONENT}

_EMPTY = np.empty(0, dtype=np.float64)


def kernel_params(kernel: KernelKind, d: int):
    """Flatten a kernel into the scalar/array tuple the njit cores expect.

    Returns (kind, norm, alpha, expo, c_low, c_high, vol_const, tab_r, tab_v).
    """
    if isinstance(kernel, ChungLu):
        return (KIND_CHUNG_LU, NORM_MAX, 0.0, 1.0, 1.0, 1.0, 0.0, _EMPTY, _EMPTY)
    norm = _NORM_CODE[kernel.norm]
    vol_const = geometry.unit_ball_volume(d) if norm == NORM_EUCLIDEAN else 0.0
    tab_r, tab_v = _EMPTY, _EMPTY
    if norm == NORM_EUCLIDEAN and d >= 3:
        tab_r, tab_v = geometry._euclid_table(d)
    if isinstance(kernel, DistanceKernel):
        return (KIND_DISTANCE, norm, kernel.alpha, max(kernel.alpha, 1.0), 1.0, 1.0, vol_const, tab_r, tab_v)
    if isinstance(kernel, ThresholdKernel):
        return (KIND_THRESHOLD, norm, 0.0, 1.0, kernel.c_low, kernel.c_high, vol_const, tab_r, tab_v)
    raise TypeError(f"unknown kernel {kernel!r}")


@njit(inline="always", cache=True)
def torus_gap(a, b):
    delta = a - b
    if delta < -0.5:
        delta += 1.0
    elif delta >= 0.5:
        delta -= 1.0
    return abs(delta)


@njit(inline="always", cache=True)
def pair_distance(pos, u, v, d, norm):
    if norm == NORM_MAX:
        m = 0.0
        for ax in range(d):
            g = torus_gap(pos[u, ax], pos[v, ax])
            if g > m:
                m = g
        return m
    elif norm == NORM_EUCLIDEAN:
        s = 0.0
        for ax in range(d):
            g = torus_gap(pos[u, ax], pos[v, ax])
            s += g * g
        return math.sqrt(s)
    else:
        m = 1.0
        for ax in range(d):
            g = torus_gap(pos[u, ax], pos[v, ax])
            if g < m:
                m = g
        return m


@njit(cache=True)
def ball_volume_nb(r, d, norm, vol_const, tab_r, tab_v):
    if r <= 0.0:
        return 0.0
    if norm == NORM_MAX:
        x = 2.0 * r
        if x >= 1.0:
            return 1.0
        return x**d
    if norm == NORM_MIN_COMPONENT:
        x = 2.0 * r
        if x >= 1.0:
            return 1.0
        return 1.0 - (1.0 - x) ** d
    # euclidean
    if r <= 0.5:
        v = vol_const * r**d
        return v if v < 1.0 else 1.0
    if d == 1:
        return 1.0
    if d == 2:
        rmax = 0.7071067811865476
        if r >= rmax:
            return 1.0
        seg = r * r * math.acos(1.0 / (2.0 * r)) - 0.5 * math.sqrt(r * r - 0.25)
        return math.pi * r * r - 4.0 * seg
    if r * r >= 0.25 * d:
        return 1.0
    # interpolate the Monte Carlo table
    k = np.searchsorted(tab_r, r)
    if k <= 0:
        return tab_v[0]
    if k >= tab_r.shape[0]:
        return 1.0
    t = (r - tab_r[k - 1]) / (tab_r[k] - tab_r[k - 1])
    return tab_v[k - 1] + t * (tab_v[k] - tab_v[k - 1])


@njit(cache=True)
def inverse_volume_nb(v, d, norm, vol_const, tab_r, tab_v):
    if v <= 0.0:
        return 0.0
    if norm == NORM_MAX:
        return 0.5 * v ** (1.0 / d)
    if norm == NORM_MIN_COMPONENT:
        return 0.5 * (1.0 - (1.0 - v) ** (1.0 / d))
    r = (v / vol_const) ** (1.0 / d)
    if r <= 0.5:
        return r
    if v >= 1.0:
        return 0.5 * math.sqrt(d)
    lo = 0.5
    hi = 0.5 * math.sqrt(d)
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if ball_volume_nb(mid, d, norm, vol_const, tab_r, tab_v) >= v:
            hi = mid
        else:
            lo = mid
    return hi


@njit(inline="always", cache=True)
def edge_prob_pair(pos, a, b, w, invW, kind, norm, d, alpha, expo, c_low, c_high, vol_const, tab_r, tab_v):
    """Edge probability of the pair (a, b), a < b, from positions and weights.

    Evaluation order is fixed so that the naive and grid samplers see the
    same floating-point value for the same pair.  Sharp thresholds
    (c_low = c_high = 1) compare coordinate gaps against the ball radius
    with an early exit instead of forming the full distance.
    """
    if kind == KIND_CHUNG_LU:
        p = (w[a] * invW) * w[b]
        return p if p < 1.0 else 1.0
    if kind == KIND_DISTANCE:
        dist = pair_distance(pos, a, b, d, norm)
        vol = ball_volume_nb(dist, d, norm, vol_const, tab_r, tab_v)
        if vol <= 0.0:
            return 1.0
        p = vol ** (-alpha) * ((w[a] * invW) ** expo * w[b] ** expo)
        return p if p < 1.0 else 1.0
    q = (w[a] * invW) * w[b]
    qc = q if q < 1.0 else 1.0
    if c_low == 1.0 and c_high == 1.0:
        if norm == NORM_MAX:
            if d == 1:
                r0 = 0.5 * qc
            elif d == 2:
                r0 = 0.5 * math.sqrt(qc)
            else:
                r0 = 0.5 * qc ** (1.0 / d)
            for ax in range(d):
                if torus_gap(pos[a, ax], pos[b, ax]) > r0:
                    return 0.0
            return 1.0
        if norm == NORM_MIN_COMPONENT:
            if d == 1:
                r0 = 0.5 * qc
            else:
                r0 = 0.5 * (1.0 - (1.0 - qc) ** (1.0 / d))
            for ax in range(d):
                if torus_gap(pos[a, ax], pos[b, ax]) <= r0:
                    return 1.0
            return 0.0
        dist = pair_distance(pos, a, b, d, norm)
        vol = ball_volume_nb(dist, d, norm, vol_const, tab_r, tab_v)
        return 1.0 if vol <= qc else 0.0
    dist = pair_distance(pos, a, b, d, norm)
    r0 = inverse_volume_nb(qc, d, norm, vol_const, tab_r, tab_v)
    lo = c_low * r0
    hi = c_high * r0
    if dist <= lo:
        return 1.0
    if dist >= hi:
        return 0.0
    return (hi - dist) / (hi - lo)


@njit(cache=True)
def pair_prob_nb(kind, norm, d, alpha, expo, c_low, c_high, vol_const, tab_r, tab_v, q, dist):
    """Edge probability for one pair; q = w_u * w_v / W, dist = torus distance."""
    if kind == KIND_CHUNG_LU:
        return q if q < 1.0 else 1.0
    if kind == KIND_DISTANCE:
        vol = ball_volume_nb(dist, d, norm, vol_const, tab_r, tab_v)
        if vol <= 0.0:
            return 1.0
        p = vol ** (-alpha) * q**expo
        return p if p < 1.0 else 1.0
    qc = q if q < 1.0 else 1.0
    if c_low == 1.0 and c_high == 1.0:
        vol = ball_volume_nb(dist, d, norm, vol_const, tab_r, tab_v)
        return 1.0 if vol <= qc else 0.0
    r0 = inverse_volume_nb(qc, d, norm, vol_const, tab_r, tab_v)
    lo = c_low * r0
    hi = c_high * r0
    if dist <= lo:
        return 1.0
    if dist >= hi:
        return 0.0
    return (hi - dist) / (hi - lo)
