"""Power-law vertex weight sequences: sampling, tail verification, partial sums.

Weights are exact Pareto draws: F(z) = 1 - (z / w_min)^(1-beta) for
z >= w_min.  The inverse CDF has the closed form w_min * (1-u)^(-1/(beta-1)),
so sequences are reproducible bit-for-bit from a seed and all moments needed
by tests are available in closed form (mean = w_min * (beta-1)/(beta-2)).

A sequence carries the heavy-core threshold ``w_bar``; the default is
(n / ln^2 n)^(1/(beta-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Tail-check defaults, frozen from a pilot over 100 sampled sequences at
# n = 1e5, beta = 2.5, eta = 0.1 (observed upper ratios: median 1.0, max 48).
# The upper constant is large because the check includes the extreme tail,
# where count * w^(beta-1-eta) / n is driven by the heavy-tailed maximum
# weight.
DEFAULT_ETA = 0.1
DEFAULT_C1 = 0.4
DEFAULT_C2 = 50.0


def default_w_bar(n: int, beta: float) -> float:
    """Heavy-core weight threshold (n / ln^2 n)^(1/(beta-1))."""
    if n < 3:
        return float(n)
    return (n / math.log(n) ** 2) ** (1.0 / (beta - 1.0))


def pareto_mean(beta: float, w_min: float = 1.0) -> float:
    """Exact mean of the Pareto weight distribution (finite for beta > 2)."""
    return w_min * (beta - 1.0) / (beta - 2.0)


def pareto_inverse_cdf(u, beta: float, w_min: float = 1.0):
    """Invert F(z) = 1 - (z/w_min)^(1-beta); valid for beta > 1, u in [0, 1)."""
    u = np.asarray(u, dtype=np.float64)
    out = w_min * (1.0 - u) ** (-1.0 / (beta - 1.0))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Sorted non-increasing positive weights with cached aggregates."""

    values: np.ndarray
    w_bar: float
    beta: float | None = None
    w_min_param: float | None = None
    seed: int | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("weights must be a non-empty 1-d array")
        if not np.all(vals[:-1] >= vals[1:]):
            raise ValueError("weights must be sorted non-increasing")
        if vals[-1] <= 0.0 or not np.isfinite(vals[0]):
            raise ValueError("weights must be positive and finite")
        object.__setattr__(self, "values", vals)
        if not (self.w_bar > 0.0 and math.isfinite(self.w_bar)):
            raise ValueError("w_bar must be a positive weight threshold")

    def __len__(self) -> int:
        return self.values.size

    @cached_property
    def total(self) -> float:
        return float(self._prefix[-1])

    @property
    def w_min(self) -> float:
        return float(self.values[-1])

    @property
    def w_max(self) -> float:
        return float(self.values[0])

    @cached_property
    def _prefix(self) -> np.ndarray:
        # _prefix[k] = sum of the k largest weights
        return np.concatenate(([0.0], np.cumsum(self.values)))

    @cached_property
    def _ascending(self) -> np.ndarray:
        return self.values[::-1]

    def count_ge(self, w: float) -> int:
        """#{v : w_v >= w} in O(log n)."""
        n = self.values.size
        return int(n - np.searchsorted(self._ascending, w, side="left"))

    def heavy_count(self) -> int:
        return self.count_ge(self.w_bar)


def sample_weights(
    n: int,
    beta: float,
    w_min: float = 1.0,
    seed: int = 0,
    w_bar: float | None = None,
) -> WeightSequence:
    """Draw n i.i.d. Pareto weights and sort them non-increasing.

    Deterministic for a fixed (n, beta, w_min, seed).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not (2.0 < beta < 3.0):
        raise ValueError("beta must lie in (2, 3)")
    if w_min <= 0.0:
        raise ValueError("w_min must be positive")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    vals = pareto_inverse_cdf(u, beta, w_min)
    vals[::-1].sort()  # in-place descending
    wb = default_w_bar(n, beta) if w_bar is None else float(w_bar)
    return WeightSequence(vals, wb, beta=beta, w_min_param=w_min, seed=seed)


def partial_weight_sums(weights: WeightSequence, w: float) -> tuple[float, float, int]:
    """Return (W_ge, W_le, count_ge) for the threshold w.

    W_ge sums weights >= w, W_le sums weights <= w; entries equal to w are
    counted in both sums.
    """
    if w < 0.0:
        raise ValueError("w must be >= 0")
    n = weights.values.size
    asc = weights._ascending
    count_ge = n - int(np.searchsorted(asc, w, side="left"))
    count_gt = n - int(np.searchsorted(asc, w, side="right"))
    # prefix runs over descending order, so the k heaviest come first
    prefix = weights._prefix
    w_ge = float(prefix[count_ge])
    w_le = float(prefix[n] - prefix[count_gt])
    return w_ge, w_le, count_ge


@dataclass(frozen=True)
class PowerLawReport:
    """Outcome of the tail-shape check of a weight sequence."""

    pl1_pass: bool
    pl2_lower_pass: bool
    pl2_upper_pass: bool
    eta: float
    c1: float
    c2: float
    worst_ratio_lower: float
    worst_lower_at: float
    worst_ratio_upper: float
    worst_upper_at: float

    @property
    def passed(self) -> bool:
        return self.pl1_pass and self.pl2_lower_pass and self.pl2_upper_pass


def verify_power_law(
    weights: WeightSequence,
    eta: float = DEFAULT_ETA,
    c1: float = DEFAULT_C1,
    c2: float = DEFAULT_C2,
    beta: float | None = None,
) -> PowerLawReport:
    """Check the two-sided tail bounds of a weight sequence on a log grid.

    The lower bound  count(w) >= c1 * n * w^-(beta-1+eta)  is checked for
    w in [w_min, w_bar]; the upper bound with exponent beta-1-eta for all
    w >= w_min.  The grid has at least 64 points per decade and additionally
    contains every distinct weight value, so the extrema of the step function
    count(w) are hit exactly.
    """
    if eta <= 0.0:
        raise ValueError("eta must be positive")
    if c1 <= 0.0 or c2 <= 0.0:
        raise ValueError("c1 and c2 must be positive")
    b = weights.beta if beta is None else beta
    if b is None:
        raise ValueError("beta unknown: pass beta explicitly")

    n = weights.values.size
    w_min, w_max = weights.w_min, weights.w_max
    decades = max(math.log10(w_max / w_min), 1e-9)
    grid = np.geomspace(w_min, w_max, int(math.ceil(64 * decades)) + 2)
    grid = np.unique(np.concatenate((grid, weights.values)))

    asc = weights._ascending
    counts = n - np.searchsorted(asc, grid, side="left")

    ratio_lower = counts * grid ** (b - 1.0 + eta) / n
    ratio_upper = counts * grid ** (b - 1.0 - eta) / n

    lower_mask = grid <= max(weights.w_bar, w_min)
    i_lo = int(np.argmin(np.where(lower_mask, ratio_lower, np.inf)))
    i_up = int(np.argmax(ratio_upper))

    worst_lower = float(ratio_lower[i_lo])
    worst_upper = float(ratio_upper[i_up])
    return PowerLawReport(
        pl1_pass=bool(w_min > 0.0 and np.isfinite(w_min)),
        pl2_lower_pass=bool(worst_lower >= c1),
        pl2_upper_pass=bool(worst_upper <= c2),
        eta=eta,
        c1=c1,
        c2=c2,
        worst_ratio_lower=worst_lower,
        worst_lower_at=float(grid[i_lo]),
        worst_ratio_upper=worst_upper,
        worst_upper_at=float(grid[i_up]),
    )


def write_weights(weights: WeightSequence, path) -> None:
    """Write one weight per line with a metadata header."""
    beta = weights.beta if weights.beta is not None else float("nan")
    wmin = weights.w_min_param if weights.w_min_param is not None else weights.w_min
    seed = weights.seed if weights.seed is not None else -1
    with open(path, "w") as fh:
        fh.write(f"# n={len(weights)} beta={beta!r} wmin={wmin!r} seed={seed}\n")
        for w in weights.values:
            fh.write(repr(float(w)) + "\n")


def read_weights(path, w_bar: float | None = None) -> WeightSequence:
    """Read a weight file written by :func:`write_weights`."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError(f"{path}: line 1: missing weight header")
        meta = _parse_header(header, path)
        vals = np.empty(meta["n"], dtype=np.float64)
        for i in range(meta["n"]):
            line = fh.readline()
            if not line:
                raise ValueError(f"{path}: line {i + 2}: expected {meta['n']} weights")
            try:
                vals[i] = float(line)
            except ValueError:
                raise ValueError(f"{path}: line {i + 2}: bad weight {line.strip()!r}") from None
    beta = meta["beta"]
    beta = None if math.isnan(beta) else beta
    if w_bar is None:
        if beta is None:
            raise ValueError(f"{path}: header carries no beta; pass w_bar explicitly")
        w_bar = default_w_bar(meta["n"], beta)
    seed = meta["seed"] if meta["seed"] >= 0 else None
    return WeightSequence(vals, w_bar, beta=beta, w_min_param=meta["wmin"], seed=seed)


def _parse_header(header: str, path) -> dict:
    fields = {}
    for tok in header.lstrip("#").split():
        if "=" not in tok:
            raise ValueError(f"{path}: line 1: bad header token {tok!r}")
        key, val = tok.split("=", 1)
        fields[key] = val
    try:
        return {
            "n": int(fields["n"]),
            "beta": float(fields["beta"]),
            "wmin": float(fields["wmin"]),
            "seed": int(fields["seed"]),
        }
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: line 1: malformed header ({exc})") from None
