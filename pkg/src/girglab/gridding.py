"""Bucketed-grid sampler with expected near-linear running time.

Vertices are grouped into weight buckets (powers of two over w_min).  For a
bucket pair with maximal weight product ratio q_bar, the torus is cut into
cells at the level whose side covers the radius inside which the kernel can
saturate (for thresholds: the whole support).  Then

* pairs in same/adjacent cells ("type I") are enumerated and tested exactly,
  with the same keyed per-pair uniform the naive sampler uses;
* for the distance kernel, pairs in cells that first become non-adjacent at
  some level ("type II") are processed by geometric skipping under the upper
  bound p_bar = p(q_bar, minimal cell distance), and a proposed pair is kept
  when its keyed uniform is below p_true / p_bar (exact thinning).

Every unordered pair lands in exactly one context: cells only separate once
while descending levels, and a pair is either adjacent at the final level or
has a unique first separation level.

The max norm uses one d-dimensional Morton-coded hierarchy.  The
min-component norm runs an independent one-dimensional decomposition per
coordinate axis; a pair is owned by its arg-min axis (ties to the lowest
axis), and candidates proposed on any other axis are discarded, so each pair
is again decided exactly once, by the same keyed uniform no matter which
axis proposed it.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from numba import njit

from . import _evalnb
from ._evalnb import KIND_DISTANCE, edge_prob_pair, kernel_params, pair_prob_nb
from .geometry import inverse_volume
from .kernels import supports_grid
from .pairrng import _G, _U64, nb_fmix64, nb_pair_uniform, nb_stream_next
from .weights import WeightSequence

_LCAP_BITS = 62  # morton codes must fit an int64


@njit(inline="always", cache=True)
def _grow(arr):
    out = np.empty(arr.shape[0] * 2, arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@njit(inline="always", cache=True)
def _stream_seed(skip_seed, bi, bj, lev, ca, cb, ax):
    h = skip_seed
    h = nb_fmix64((h * _G) ^ _U64(bi))
    h = nb_fmix64((h * _G) ^ _U64(bj))
    h = nb_fmix64((h * _G) ^ _U64(lev))
    h = nb_fmix64((h * _G) ^ _U64(ca))
    h = nb_fmix64((h * _G) ^ _U64(cb))
    h = nb_fmix64((h * _G) ^ _U64(ax))
    return h


@njit(inline="always", cache=True)
def _owner_axis(pos, a, b, d):
    best = 0
    bg = _evalnb.torus_gap(pos[a, 0], pos[b, 0])
    for ax in range(1, d):
        g = _evalnb.torus_gap(pos[a, ax], pos[b, ax])
        if g < bg:
            bg = g
            best = ax
    return best


@njit(inline="always", cache=True)
def _mdecode(code, d, bits, out):
    for ax in range(d):
        out[ax] = 0
    for bit in range(bits):
        for ax in range(d):
            out[ax] |= ((code >> (bit * d + ax)) & 1) << bit


@njit(inline="always", cache=True)
def _mencode(coords, d, bits):
    code = 0
    for bit in range(bits):
        for ax in range(d):
            code |= ((coords[ax] >> bit) & 1) << (bit * d + ax)
    return code


@njit(cache=True)
def _morton_codes(pos, L, d):
    n = pos.shape[0]
    codes = np.empty(n, np.int64)
    k = np.int64(1) << L
    coords = np.empty(d, np.int64)
    for v in range(n):
        for ax in range(d):
            c = np.int64(pos[v, ax] * k)
            if c >= k:
                c = k - 1
            coords[ax] = c
        codes[v] = _mencode(coords, d, L)
    return codes


@njit(inline="always", cache=True)
def _cheb_cell_dist(ca, cb, d, bits, sa, sb):
    _mdecode(ca, d, bits, sa)
    _mdecode(cb, d, bits, sb)
    k = np.int64(1) << bits
    m = np.int64(0)
    for ax in range(d):
        dd = sa[ax] - sb[ax]
        if dd < 0:
            dd = -dd
        if k - dd < dd:
            dd = k - dd
        if dd > m:
            m = dd
    return m


@njit(cache=True)
def _grid_core_max(
    pos, w, invW, d, kind, norm, alpha, expo, c_low, c_high, vol_const,
    tab_r, tab_v, bk_lo, bk_hi, wmax_b, vert, codes, L_max, lstars,
    offsets, pair_seed, skip_seed,
):
    B = bk_lo.shape[0]
    n_off = offsets.shape[0]
    cap = 1024
    eu = np.empty(cap, np.int32)
    ev = np.empty(cap, np.int32)
    m = 0
    cand = np.int64(0)
    coords = np.empty(d, np.int64)
    sa = np.empty(d, np.int64)
    sb = np.empty(d, np.int64)
    nb_codes = np.empty(n_off, np.int64)

    for bi in range(B):
        alo0, ahi0 = bk_lo[bi], bk_hi[bi]
        if alo0 >= ahi0:
            continue
        for bj in range(bi, B):
            blo0, bhi0 = bk_lo[bj], bk_hi[bj]
            if blo0 >= bhi0:
                continue
            same = bi == bj
            lstar = lstars[bi, bj]
            shift = d * (L_max - lstar)
            k_cells = np.int64(1) << lstar
            qbar = (wmax_b[bi] * invW) * wmax_b[bj]
            if qbar > 1.0:
                qbar = 1.0

            # ---- type I: same or adjacent cells at level lstar
            i = alo0
            while i < ahi0:
                ca = codes[i] >> shift
                j = i + 1
                while j < ahi0 and (codes[j] >> shift) == ca:
                    j += 1
                _mdecode(ca, d, lstar, coords)
                n_nb = 0
                for o in range(n_off):
                    for ax in range(d):
                        c = coords[ax] + offsets[o, ax]
                        if c < 0:
                            c += k_cells
                        elif c >= k_cells:
                            c -= k_cells
                        sa[ax] = c
                    cb = _mencode(sa, d, lstar)
                    seen = False
                    for t in range(n_nb):
                        if nb_codes[t] == cb:
                            seen = True
                            break
                    if not seen:
                        nb_codes[n_nb] = cb
                        n_nb += 1
                for t in range(n_nb):
                    cb = nb_codes[t]
                    if same and cb < ca:
                        continue
                    rlo = cb << shift
                    rhi = (cb + 1) << shift
                    blo = blo0 + np.searchsorted(codes[blo0:bhi0], rlo)
                    bhi = blo0 + np.searchsorted(codes[blo0:bhi0], rhi)
                    if blo >= bhi:
                        continue
                    if same and cb == ca:
                        for ii in range(i, j):
                            a0 = vert[ii]
                            for jj in range(ii + 1, j):
                                b0 = vert[jj]
                                a, b = (a0, b0) if a0 < b0 else (b0, a0)
                                cand += 1
                                p = edge_prob_pair(
                                    pos, a, b, w, invW, kind, norm, d, alpha, expo,
                                    c_low, c_high, vol_const, tab_r, tab_v,
                                )
                                if p >= 1.0 or (p > 0.0 and nb_pair_uniform(pair_seed, a, b) < p):
                                    if m == eu.shape[0]:
                                        eu = _grow(eu)
                                        ev = _grow(ev)
                                    eu[m] = a
                                    ev[m] = b
                                    m += 1
                    else:
                        for ii in range(i, j):
                            a0 = vert[ii]
                            for jj in range(blo, bhi):
                                b0 = vert[jj]
                                if a0 == b0:
                                    continue
                                a, b = (a0, b0) if a0 < b0 else (b0, a0)
                                cand += 1
                                p = edge_prob_pair(
                                    pos, a, b, w, invW, kind, norm, d, alpha, expo,
                                    c_low, c_high, vol_const, tab_r, tab_v,
                                )
                                if p >= 1.0 or (p > 0.0 and nb_pair_uniform(pair_seed, a, b) < p):
                                    if m == eu.shape[0]:
                                        eu = _grow(eu)
                                        ev = _grow(ev)
                                    eu[m] = a
                                    ev[m] = b
                                    m += 1
                i = j

            # ---- type II: first-separation cell pairs (distance kernel only)
            if kind != KIND_DISTANCE:
                continue
            for lev in range(2, lstar + 1):
                shift_l = d * (L_max - lev)
                k_l = np.int64(1) << lev
                k_p = k_l >> 1
                s_l = 1.0 / k_l
                i = alo0
                while i < ahi0:
                    ca = codes[i] >> shift_l
                    j = i + 1
                    while j < ahi0 and (codes[j] >> shift_l) == ca:
                        j += 1
                    pa = ca >> d
                    _mdecode(pa, d, lev - 1, coords)
                    n_nb = 0
                    for o in range(n_off):
                        for ax in range(d):
                            c = coords[ax] + offsets[o, ax]
                            if c < 0:
                                c += k_p
                            elif c >= k_p:
                                c -= k_p
                            sa[ax] = c
                        qp = _mencode(sa, d, lev - 1)
                        seen = False
                        for t in range(n_nb):
                            if nb_codes[t] == qp:
                                seen = True
                                break
                        if not seen:
                            nb_codes[n_nb] = qp
                            n_nb += 1
                    na = j - i
                    for t in range(n_nb):
                        qp = nb_codes[t]
                        rlo = (qp << d) << shift_l
                        rhi = ((qp + 1) << d) << shift_l
                        ii2 = blo0 + np.searchsorted(codes[blo0:bhi0], rlo)
                        while ii2 < bhi0 and codes[ii2] < rhi:
                            cb = codes[ii2] >> shift_l
                            jj2 = ii2 + 1
                            while jj2 < bhi0 and (codes[jj2] >> shift_l) == cb:
                                jj2 += 1
                            if (not same or cb > ca):
                                cd = _cheb_cell_dist(ca, cb, d, lev, sa, sb)
                                if cd >= 2:
                                    nb_count = jj2 - ii2
                                    dmin = s_l * (cd - 1)
                                    pbar = pair_prob_nb(
                                        kind, norm, d, alpha, expo, c_low, c_high,
                                        vol_const, tab_r, tab_v, qbar, dmin,
                                    )
                                    if pbar > 0.0:
                                        slots = np.int64(na) * np.int64(nb_count)
                                        state = _stream_seed(skip_seed, bi, bj, lev, ca, cb, 0)
                                        lq = math.log1p(-pbar) if pbar < 1.0 else 0.0
                                        t2 = np.int64(-1)
                                        while True:
                                            if pbar >= 1.0:
                                                gap = np.int64(0)
                                            else:
                                                u01, state = nb_stream_next(state)
                                                gap = np.int64(math.log1p(-u01) / lq)
                                            t2 += 1 + gap
                                            if t2 >= slots:
                                                break
                                            a0 = vert[i + t2 // nb_count]
                                            b0 = vert[ii2 + t2 % nb_count]
                                            cand += 1
                                            a, b = (a0, b0) if a0 < b0 else (b0, a0)
                                            p = edge_prob_pair(
                                                pos, a, b, w, invW, kind, norm, d, alpha,
                                                expo, c_low, c_high, vol_const, tab_r, tab_v,
                                            )
                                            if nb_pair_uniform(pair_seed, a, b) * pbar < p:
                                                if m == eu.shape[0]:
                                                    eu = _grow(eu)
                                                    ev = _grow(ev)
                                                eu[m] = a
                                                ev[m] = b
                                                m += 1
                            ii2 = jj2
                    i = j
    return eu[:m], ev[:m], cand


@njit(cache=True)
def _grid_core_mincomp(
    pos, w, invW, d, kind, norm, alpha, expo, c_low, c_high, vol_const,
    tab_r, tab_v, bk_lo, bk_hi, wmax_b, vert_ax, codes_ax, L_max, lstars,
    pair_seed, skip_seed,
):
    B = bk_lo.shape[0]
    cap = 1024
    eu = np.empty(cap, np.int32)
    ev = np.empty(cap, np.int32)
    m = 0
    cand = np.int64(0)
    nb_codes = np.empty(3, np.int64)

    for ax in range(d):
        vert = vert_ax[ax]
        codes = codes_ax[ax]
        for bi in range(B):
            alo0, ahi0 = bk_lo[bi], bk_hi[bi]
            if alo0 >= ahi0:
                continue
            for bj in range(bi, B):
                blo0, bhi0 = bk_lo[bj], bk_hi[bj]
                if blo0 >= bhi0:
                    continue
                same = bi == bj
                lstar = lstars[bi, bj]
                shift = L_max - lstar
                k_cells = np.int64(1) << lstar
                qbar = (wmax_b[bi] * invW) * wmax_b[bj]
                if qbar > 1.0:
                    qbar = 1.0

                # ---- type I: same or adjacent 1-d cells on this axis
                i = alo0
                while i < ahi0:
                    ca = codes[i] >> shift
                    j = i + 1
                    while j < ahi0 and (codes[j] >> shift) == ca:
                        j += 1
                    n_nb = 0
                    for o in range(-1, 2):
                        c = ca + o
                        if c < 0:
                            c += k_cells
                        elif c >= k_cells:
                            c -= k_cells
                        seen = False
                        for t in range(n_nb):
                            if nb_codes[t] == c:
                                seen = True
                                break
                        if not seen:
                            nb_codes[n_nb] = c
                            n_nb += 1
                    for t in range(n_nb):
                        cb = nb_codes[t]
                        if same and cb < ca:
                            continue
                        rlo = cb << shift
                        rhi = (cb + 1) << shift
                        blo = blo0 + np.searchsorted(codes[blo0:bhi0], rlo)
                        bhi = blo0 + np.searchsorted(codes[blo0:bhi0], rhi)
                        if blo >= bhi:
                            continue
                        if same and cb == ca:
                            for ii in range(i, j):
                                a0 = vert[ii]
                                for jj in range(ii + 1, j):
                                    b0 = vert[jj]
                                    cand += 1
                                    if _owner_axis(pos, a0, b0, d) != ax:
                                        continue
                                    a, b = (a0, b0) if a0 < b0 else (b0, a0)
                                    p = edge_prob_pair(
                                        pos, a, b, w, invW, kind, norm, d, alpha, expo,
                                        c_low, c_high, vol_const, tab_r, tab_v,
                                    )
                                    if p >= 1.0 or (p > 0.0 and nb_pair_uniform(pair_seed, a, b) < p):
                                        if m == eu.shape[0]:
                                            eu = _grow(eu)
                                            ev = _grow(ev)
                                        eu[m] = a
                                        ev[m] = b
                                        m += 1
                        else:
                            for ii in range(i, j):
                                a0 = vert[ii]
                                for jj in range(blo, bhi):
                                    b0 = vert[jj]
                                    if a0 == b0:
                                        continue
                                    cand += 1
                                    if _owner_axis(pos, a0, b0, d) != ax:
                                        continue
                                    a, b = (a0, b0) if a0 < b0 else (b0, a0)
                                    p = edge_prob_pair(
                                        pos, a, b, w, invW, kind, norm, d, alpha, expo,
                                        c_low, c_high, vol_const, tab_r, tab_v,
                                    )
                                    if p >= 1.0 or (p > 0.0 and nb_pair_uniform(pair_seed, a, b) < p):
                                        if m == eu.shape[0]:
                                            eu = _grow(eu)
                                            ev = _grow(ev)
                                        eu[m] = a
                                        ev[m] = b
                                        m += 1
                    i = j

                # ---- type II on this axis (distance kernel only)
                if kind != KIND_DISTANCE:
                    continue
                for lev in range(2, lstar + 1):
                    shift_l = L_max - lev
                    k_l = np.int64(1) << lev
                    k_p = k_l >> 1
                    s_l = 1.0 / k_l
                    i = alo0
                    while i < ahi0:
                        ca = codes[i] >> shift_l
                        j = i + 1
                        while j < ahi0 and (codes[j] >> shift_l) == ca:
                            j += 1
                        pa = ca >> 1
                        na = j - i
                        n_nb = 0
                        for o in range(-1, 2):
                            c = pa + o
                            if c < 0:
                                c += k_p
                            elif c >= k_p:
                                c -= k_p
                            seen = False
                            for t in range(n_nb):
                                if nb_codes[t] == c:
                                    seen = True
                                    break
                            if not seen:
                                nb_codes[n_nb] = c
                                n_nb += 1
                        for t in range(n_nb):
                            qp = nb_codes[t]
                            rlo = (qp << 1) << shift_l
                            rhi = ((qp + 1) << 1) << shift_l
                            ii2 = blo0 + np.searchsorted(codes[blo0:bhi0], rlo)
                            while ii2 < bhi0 and codes[ii2] < rhi:
                                cb = codes[ii2] >> shift_l
                                jj2 = ii2 + 1
                                while jj2 < bhi0 and (codes[jj2] >> shift_l) == cb:
                                    jj2 += 1
                                if (not same) or cb > ca:
                                    dd = ca - cb
                                    if dd < 0:
                                        dd = -dd
                                    if k_l - dd < dd:
                                        dd = k_l - dd
                                    if dd >= 2:
                                        nb_count = jj2 - ii2
                                        dmin = s_l * (dd - 1)
                                        pbar = pair_prob_nb(
                                            kind, norm, d, alpha, expo, c_low, c_high,
                                            vol_const, tab_r, tab_v, qbar, dmin,
                                        )
                                        if pbar > 0.0:
                                            slots = np.int64(na) * np.int64(nb_count)
                                            state = _stream_seed(skip_seed, bi, bj, lev, ca, cb, ax)
                                            lq = math.log1p(-pbar) if pbar < 1.0 else 0.0
                                            t2 = np.int64(-1)
                                            while True:
                                                if pbar >= 1.0:
                                                    gap = np.int64(0)
                                                else:
                                                    u01, state = nb_stream_next(state)
                                                    gap = np.int64(math.log1p(-u01) / lq)
                                                t2 += 1 + gap
                                                if t2 >= slots:
                                                    break
                                                a0 = vert[i + t2 // nb_count]
                                                b0 = vert[ii2 + t2 % nb_count]
                                                cand += 1
                                                if _owner_axis(pos, a0, b0, d) != ax:
                                                    continue
                                                a, b = (a0, b0) if a0 < b0 else (b0, a0)
                                                p = edge_prob_pair(
                                                    pos, a, b, w, invW, kind, norm, d,
                                                    alpha, expo, c_low, c_high,
                                                    vol_const, tab_r, tab_v,
                                                )
                                                if nb_pair_uniform(pair_seed, a, b) * pbar < p:
                                                    if m == eu.shape[0]:
                                                        eu = _grow(eu)
                                                        ev = _grow(ev)
                                                    eu[m] = a
                                                    ev[m] = b
                                                    m += 1
                                ii2 = jj2
                        i = j
    return eu[:m], ev[:m], cand


def _bucket_layout(values: np.ndarray):
    """Contiguous [lo, hi) ranges of vertices per power-of-two weight bucket."""
    w_min = values[-1]
    bucket_of = np.floor(np.log2(values / w_min)).astype(np.int64)
    bucket_of = np.maximum(bucket_of, 0)
    B = int(bucket_of[0]) + 1
    # values are non-increasing, so bucket ids are non-increasing
    neg = -bucket_of
    lo = np.searchsorted(neg, -np.arange(B), side="left")
    hi = np.searchsorted(neg, -np.arange(B), side="right")
    wmax_b = np.zeros(B)
    for b in range(B):
        if lo[b] < hi[b]:
            wmax_b[b] = values[lo[b]]
    return lo.astype(np.int64), hi.astype(np.int64), wmax_b


def generate_grid(config, weights: WeightSequence | None = None):
    """Grid sampler; same output distribution as ``generate_naive``."""
    from .sampler import build_graph

    if not supports_grid(config.kernel):
        raise ValueError(
            "grid sampler supports only distance (alpha > 1) and threshold "
            "kernels with max or min_component norm"
        )
    if weights is None:
        weights = config.sample_weights()
    if len(weights) != config.n:
        raise ValueError(f"weight sequence has {len(weights)} entries, config.n = {config.n}")
    positions = config.sample_positions()
    d = config.d
    kernel = config.kernel
    kind, norm, alpha, expo, c_low, c_high, vol_const, tab_r, tab_v = kernel_params(kernel, d)

    w = weights.values
    invW = 1.0 / weights.total
    bk_lo, bk_hi, wmax_b = _bucket_layout(w)
    B = bk_lo.size

    c_cover = c_high if kind != KIND_DISTANCE else 1.0
    mincomp = norm == _evalnb.NORM_MIN_COMPONENT and d > 1
    axis_dim = 1 if mincomp else d
    l_cap = min(24, _LCAP_BITS // axis_dim)

    lstars = np.zeros((B, B), dtype=np.int64)
    for bi in range(B):
        if bk_lo[bi] >= bk_hi[bi]:
            continue
        for bj in range(bi, B):
            if bk_lo[bj] >= bk_hi[bj]:
                continue
            qbar = min(1.0, wmax_b[bi] * wmax_b[bj] * invW)
            r_cover = c_cover * inverse_volume(qbar, d, kernel.norm)
            if r_cover >= 1.0:
                lstar = 0
            else:
                lstar = max(0, int(math.floor(math.log2(1.0 / r_cover))))
            lstars[bi, bj] = min(lstar, l_cap)
    L_max = int(lstars.max())

    pair_seed = _U64(config.pair_seed)
    skip_seed = _U64(config.skip_seed)

    if mincomp:
        k = np.int64(1) << L_max
        vert_ax = np.empty((d, config.n), dtype=np.int32)
        codes_ax = np.empty((d, config.n), dtype=np.int64)
        for ax in range(d):
            raw = np.minimum((positions[:, ax] * k).astype(np.int64), k - 1)
            for b in range(B):
                lo, hi = bk_lo[b], bk_hi[b]
                order = lo + np.argsort(raw[lo:hi], kind="stable")
                vert_ax[ax, lo:hi] = order.astype(np.int32)
                codes_ax[ax, lo:hi] = raw[order]
        eu, ev, cand = _grid_core_mincomp(
            positions, w, invW, d, kind, norm, alpha, expo, c_low, c_high,
            vol_const, tab_r, tab_v, bk_lo, bk_hi, wmax_b, vert_ax, codes_ax,
            L_max, lstars, pair_seed, skip_seed,
        )
        # the per-axis decomposition can propose a pair on several axes; the
        # owner filter keeps exactly one, so no dedup pass is needed
    else:
        raw = _morton_codes(positions, L_max, d)
        vert = np.empty(config.n, dtype=np.int32)
        codes = np.empty(config.n, dtype=np.int64)
        for b in range(B):
            lo, hi = bk_lo[b], bk_hi[b]
            if lo >= hi:
                continue
            order = lo + np.argsort(raw[lo:hi], kind="stable")
            vert[lo:hi] = order.astype(np.int32)
            codes[lo:hi] = raw[order]
        offsets = np.array(list(itertools.product((-1, 0, 1), repeat=d)), dtype=np.int64)
        eu, ev, cand = _grid_core_max(
            positions, w, invW, d, kind, norm, alpha, expo, c_low, c_high,
            vol_const, tab_r, tab_v, bk_lo, bk_hi, wmax_b, vert, codes,
            L_max, lstars, offsets, pair_seed, skip_seed,
        )

    meta = {
        "sampler": "grid",
        "candidates": int(cand),
        "kernel": config.label(),
        "seed": config.seed,
        "beta": config.beta,
    }
    return build_graph(config.n, config.d, eu, ev, weights, positions, meta)
