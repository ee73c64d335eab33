"""Edge probability kernels and numeric verification of their marginals.

Three kernel families, all with hidden constants fixed to 1:

* ``ChungLu``          p = min(1, w_u w_v / W); positions ignored.
* ``DistanceKernel``   p = min(1, V(dist)^-alpha * (w_u w_v / W)^max(alpha,1)),
                       alpha > 0, alpha != 1; coincident points (V = 0) get
                       p = 1 as the limit of the formula.
* ``ThresholdKernel``  1 inside c_low * r0, 0 outside c_high * r0 where
                       V(r0) = min(1, w_u w_v / W), linear in between.  With
                       the default c_low = c_high = 1 the test is implemented
                       as V(dist) <= min(1, q), which is the same event up to
                       a measure-zero boundary and needs no radius inversion.

``verify_ep1`` estimates the marginal edge probability over a random second
endpoint and compares it to the bare product form; ``verify_ep2`` probes
heavy-pair probabilities at adversarial (antipodal) and random positions
against a finite-size bound with slack exponent delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Norm, ball_volume, inverse_volume, torus_distance
from .weights import WeightSequence


@dataclass(frozen=True)
class ChungLu:
    name = "chung_lu"


@dataclass(frozen=True)
class DistanceKernel:
    alpha: float
    norm: Norm = Norm.MAX
    name = "distance"

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if self.alpha == 1.0:
            raise ValueError("alpha = 1 is excluded; pick any other positive value")


@dataclass(frozen=True)
class ThresholdKernel:
    norm: Norm = Norm.MAX
    c_low: float = 1.0
    c_high: float = 1.0
    name = "threshold"

    def __post_init__(self):
        if not (0.0 < self.c_low <= self.c_high):
            raise ValueError("need 0 < c_low <= c_high")


KernelKind = ChungLu | DistanceKernel | ThresholdKernel


def kernel_label(kernel: KernelKind, d: int) -> str:
    """Compact human-readable tag used in CSV output."""
    if isinstance(kernel, ChungLu):
        return "chung_lu"
    if isinstance(kernel, DistanceKernel):
        return f"distance(d={d},alpha={kernel.alpha:g},{kernel.norm.value})"
    return f"threshold(d={d},{kernel.norm.value},c={kernel.c_low:g}..{kernel.c_high:g})"


def supports_grid(kernel: KernelKind) -> bool:
    """Whether the bucketed grid sampler can generate this kernel."""
    if isinstance(kernel, ThresholdKernel):
        return kernel.norm in (Norm.MAX, Norm.MIN_COMPONENT)
    if isinstance(kernel, DistanceKernel):
        return kernel.alpha > 1.0 and kernel.norm in (Norm.MAX, Norm.MIN_COMPONENT)
    return False


def probability_from_distance(kernel: KernelKind, q: float, dist, d: int):
    """Edge probability given the weight product ratio q = w_u w_v / W and
    the torus distance; vectorized over ``dist``."""
    dist = np.asarray(dist, dtype=np.float64)
    if isinstance(kernel, ChungLu):
        out = np.full(dist.shape, min(1.0, q))
    elif isinstance(kernel, DistanceKernel):
        vol = np.asarray(ball_volume(dist, d, kernel.norm))
        expo = max(kernel.alpha, 1.0)
        safe = np.where(vol > 0.0, vol, 1.0)
        out = np.minimum(1.0, safe ** (-kernel.alpha) * q**expo)
        out = np.where(vol > 0.0, out, 1.0)
    elif isinstance(kernel, ThresholdKernel):
        qc = min(1.0, q)
        if kernel.c_low == 1.0 and kernel.c_high == 1.0:
            vol = np.asarray(ball_volume(dist, d, kernel.norm))
            out = np.where(vol <= qc, 1.0, 0.0)
        else:
            r0 = inverse_volume(qc, d, kernel.norm)
            lo, hi = kernel.c_low * r0, kernel.c_high * r0
            out = np.zeros(dist.shape)
            out = np.where(dist <= lo, 1.0, out)
            band = (dist > lo) & (dist < hi)
            if np.any(band) and hi > lo:
                out = np.where(band, (hi - dist) / (hi - lo), out)
    else:
        raise TypeError(f"unknown kernel {kernel!r}")
    return float(out) if out.ndim == 0 else out


def edge_probability(
    kernel: KernelKind,
    w_u: float,
    w_v: float,
    W: float,
    x_u=None,
    x_v=None,
) -> float:
    """Probability of the edge {u, v} for fixed weights and positions."""
    if w_u <= 0.0 or w_v <= 0.0 or W <= 0.0:
        raise ValueError("weights and total weight must be positive")
    q = w_u * w_v / W
    if isinstance(kernel, ChungLu):
        return min(1.0, q)
    if x_u is None or x_v is None:
        raise ValueError(f"{kernel.name} kernel needs both positions")
    x_u = np.atleast_1d(np.asarray(x_u, dtype=np.float64))
    dist = torus_distance(x_u, x_v, kernel.norm)
    return float(probability_from_distance(kernel, q, dist, x_u.shape[-1]))


def ep1_closed_form(kernel: KernelKind, q: float) -> float | None:
    """Exact marginal edge probability where a closed form exists.

    Uses that V(dist) is uniform on [0, 1] for a uniform random endpoint, so
    the marginal is the integral of min(1, V^-alpha q^max(alpha,1)) dV.
    Returns None for banded threshold kernels.
    """
    if isinstance(kernel, ChungLu):
        return min(1.0, q)
    if isinstance(kernel, ThresholdKernel):
        if kernel.c_low == kernel.c_high == 1.0:
            return min(1.0, q)
        return None
    alpha = kernel.alpha
    expo = max(alpha, 1.0)
    if q >= 1.0:
        return 1.0
    v0 = q ** (expo / alpha)
    return v0 + q**expo * (v0 ** (1.0 - alpha) - 1.0) / (alpha - 1.0)


@dataclass(frozen=True)
class EP1Report:
    ratio: float
    ci_low: float
    ci_high: float
    mc_marginal: float
    reference: float
    closed_form: float | None


def verify_ep1(
    kernel: KernelKind,
    w_u: float,
    w_v: float,
    W: float,
    x_u,
    n_samples: int = 20_000,
    seed: int = 0,
) -> EP1Report:
    """Monte Carlo estimate of E_{x_v}[p_uv | x_u] / min(1, w_u w_v / W).

    Reports a 99% normal-approximation confidence interval for the ratio and,
    where available, the exact volume-integral marginal.
    """
    if n_samples < 10_000:
        raise ValueError("n_samples must be at least 10^4")
    x_u = np.atleast_1d(np.asarray(x_u, dtype=np.float64))
    d = x_u.shape[-1]
    q = w_u * w_v / W
    reference = min(1.0, q)

    if isinstance(kernel, ChungLu):
        # position-independent: the marginal is the reference itself
        return EP1Report(
            ratio=1.0, ci_low=1.0, ci_high=1.0, mc_marginal=reference,
            reference=reference, closed_form=reference,
        )
    rng = np.random.default_rng(seed)
    x_v = rng.random((n_samples, d))
    dist = torus_distance(x_u[None, :], x_v, kernel.norm)
    p = probability_from_distance(kernel, q, dist, d)

    mean = float(p.mean())
    half = 2.5758 * float(p.std(ddof=1)) / math.sqrt(n_samples)
    return EP1Report(
        ratio=mean / reference,
        ci_low=(mean - half) / reference,
        ci_high=(mean + half) / reference,
        mc_marginal=mean,
        reference=reference,
        closed_form=ep1_closed_form(kernel, q),
    )


@dataclass(frozen=True)
class EP2Report:
    min_p: float
    bound: float
    passed: bool
    n_heavy: int
    w_bar: float


def verify_ep2(
    kernel: KernelKind,
    weights: WeightSequence,
    eta: float = 0.1,
    delta: float = 0.1,
    n_pairs: int = 64,
    seed: int = 0,
    d: int = 1,
) -> EP2Report:
    """Probe heavy-pair edge probabilities against (n / w_bar^(beta-1-eta))^(delta-1).

    Pairs of vertices with weight >= w_bar are evaluated both at antipodal
    positions (distance maximal in every coordinate) and at random positions;
    the heaviest and the two lightest heavy vertices are always included.
    """
    if weights.beta is None:
        raise ValueError("weight sequence carries no beta")
    k = weights.heavy_count()
    if k < 2:
        raise ValueError(f"need at least 2 heavy vertices, found {k}")
    n = len(weights)
    vals = weights.values

    rng = np.random.default_rng(seed)
    pairs = [(0, 1), (k - 2, k - 1), (0, k - 1)]
    while len(pairs) < n_pairs + 3:
        u, v = rng.integers(0, k, 2)
        if u != v:
            pairs.append((int(u), int(v)))

    x_anti_u = np.zeros(d)
    x_anti_v = np.full(d, 0.5)
    min_p = math.inf
    for u, v in pairs:
        if isinstance(kernel, ChungLu):
            p = edge_probability(kernel, vals[u], vals[v], weights.total)
        else:
            p = edge_probability(kernel, vals[u], vals[v], weights.total, x_anti_u, x_anti_v)
            x_ru, x_rv = rng.random(d), rng.random(d)
            p = min(p, edge_probability(kernel, vals[u], vals[v], weights.total, x_ru, x_rv))
        min_p = min(min_p, p)

    bound = (n / weights.w_bar ** (weights.beta - 1.0 - eta)) ** (-1.0 + delta)
    return EP2Report(
        min_p=float(min_p),
        bound=float(bound),
        passed=bool(min_p >= bound),
        n_heavy=k,
        w_bar=weights.w_bar,
    )
