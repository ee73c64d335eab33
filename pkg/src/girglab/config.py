"""Flat key-value configuration files for model runs and experiment plans.

One ``key = value`` pair per line, ``#`` starts a comment, blank lines are
ignored.  List-valued keys take comma-separated entries.  Kernels are written
as compact specs::

    chung_lu
    distance:d=2:alpha=2:norm=min_component
    threshold:d=2:norm=max:c_low=0.8:c_high=1.2

Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Norm
from .kernels import ChungLu, DistanceKernel, KernelKind, ThresholdKernel
from .sampler import ModelConfig


def parse_kv(text: str, path="<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"{path}: line {lineno}: empty key")
        if key in out:
            raise ValueError(f"{path}: line {lineno}: duplicate key {key!r}")
        out[key] = val
    return out


def _parse_bool(val: str) -> bool:
    low = val.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"bad boolean {val!r}")


def parse_kernel_spec(spec: str) -> tuple[KernelKind, int]:
    """Parse ``name[:key=val]*`` into (kernel, dimension)."""
    parts = [p.strip() for p in spec.split(":")]
    name = parts[0].lower()
    opts: dict[str, str] = {}
    for p in parts[1:]:
        if "=" not in p:
            raise ValueError(f"bad kernel option {p!r} in {spec!r}")
        k, v = p.split("=", 1)
        opts[k.strip()] = v.strip()
    d = int(opts.pop("d", 1))
    if name == "chung_lu":
        if opts:
            raise ValueError(f"chung_lu takes no options, got {sorted(opts)}")
        return ChungLu(), d
    norm = Norm.parse(opts.pop("norm", "max"))
    if name == "distance":
        alpha = float(opts.pop("alpha", 2.0))
        if opts:
            raise ValueError(f"unknown distance options {sorted(opts)}")
        return DistanceKernel(alpha=alpha, norm=norm), d
    if name == "threshold":
        c_low = float(opts.pop("c_low", 1.0))
        c_high = float(opts.pop("c_high", 1.0))
        if opts:
            raise ValueError(f"unknown threshold options {sorted(opts)}")
        return ThresholdKernel(norm=norm, c_low=c_low, c_high=c_high), d
    raise ValueError(f"unknown kernel {name!r}; expected chung_lu, distance or threshold")


def kernel_spec(kernel: KernelKind, d: int) -> str:
    """Inverse of :func:`parse_kernel_spec`."""
    if isinstance(kernel, ChungLu):
        return f"chung_lu:d={d}"
    if isinstance(kernel, DistanceKernel):
        return f"distance:d={d}:alpha={kernel.alpha!r}:norm={kernel.norm.value}"
    return (
        f"threshold:d={d}:norm={kernel.norm.value}"
        f":c_low={kernel.c_low!r}:c_high={kernel.c_high!r}"
    )


_MODEL_KEYS = {
    "n", "beta", "w_min", "d", "kernel", "alpha", "norm",
    "c_low", "c_high", "seed", "sampler", "w_bar",
}


def parse_model_config(text: str, path="<config>") -> ModelConfig:
    kv = parse_kv(text, path)
    unknown = set(kv) - _MODEL_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    if "n" not in kv or "beta" not in kv:
        raise ValueError(f"{path}: keys 'n' and 'beta' are required")
    kernel_name = kv.get("kernel", "chung_lu")
    spec = kernel_name
    for opt in ("alpha", "norm", "c_low", "c_high"):
        if opt in kv and kv[opt]:
            spec += f":{opt}={kv[opt]}"
    if "d" in kv:
        spec += f":d={kv['d']}"
    kernel, d = parse_kernel_spec(spec)
    w_bar = float(kv["w_bar"]) if kv.get("w_bar") else None
    return ModelConfig(
        n=int(kv["n"]),
        beta=float(kv["beta"]),
        w_min=float(kv.get("w_min", "1.0")),
        d=d,
        kernel=kernel,
        seed=int(kv.get("seed", "0")),
        sampler=kv.get("sampler", "naive"),
        w_bar=w_bar,
    )


def serialize_model_config(config: ModelConfig) -> str:
    lines = [
        f"n = {config.n}",
        f"beta = {config.beta!r}",
        f"w_min = {config.w_min!r}",
        f"d = {config.d}",
        f"kernel = {config.kernel.name}",
    ]
    if isinstance(config.kernel, DistanceKernel):
        lines.append(f"alpha = {config.kernel.alpha!r}")
        lines.append(f"norm = {config.kernel.norm.value}")
    elif isinstance(config.kernel, ThresholdKernel):
        lines.append(f"norm = {config.kernel.norm.value}")
        lines.append(f"c_low = {config.kernel.c_low!r}")
        lines.append(f"c_high = {config.kernel.c_high!r}")
    lines.append(f"seed = {config.seed}")
    lines.append(f"sampler = {config.sampler}")
    if config.w_bar is not None:
        lines.append(f"w_bar = {config.w_bar!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ExperimentPlan:
    """A grid of model cells (n x beta x kernel) with replicated seeds."""

    n_values: tuple[int, ...]
    beta_values: tuple[float, ...] = (2.5,)
    kernel_specs: tuple[str, ...] = ("chung_lu",)
    seeds: int = 1
    plan_seed: int = 0
    pairs: int = 2000
    sampler: tuple[str, ...] = ("auto",)
    w_min: float = 1.0
    fit_lo: int = 5
    fit_hi: int = 100
    workers: int = 1
    save_graphs: bool = False
    measurements: tuple[str, ...] = ("degree", "components", "core", "distance")

    def __post_init__(self):
        if not self.n_values:
            raise ValueError("plan needs at least one n")
        if self.seeds < 1:
            raise ValueError("seeds per cell must be >= 1")
        if len(self.sampler) not in (1, len(self.n_values)):
            raise ValueError("sampler must be one entry or one per n value")
        for s in self.sampler:
            if s not in ("auto", "naive", "grid"):
                raise ValueError(f"unknown sampler {s!r}")
        bad = set(self.measurements) - {"degree", "components", "core", "distance"}
        if bad:
            raise ValueError(f"unknown measurements {sorted(bad)}")
        for spec in self.kernel_specs:
            parse_kernel_spec(spec)  # fail early

    def sampler_for(self, n_index: int) -> str:
        return self.sampler[0] if len(self.sampler) == 1 else self.sampler[n_index]

    def cells(self):
        """Deterministic cell enumeration: beta-major, then kernel, then n."""
        idx = 0
        for beta in self.beta_values:
            for spec in self.kernel_specs:
                for n_index, n in enumerate(self.n_values):
                    yield idx, n, beta, spec, self.sampler_for(n_index)
                    idx += 1


_PLAN_KEYS = {
    "n", "beta", "kernel", "seeds", "plan_seed", "pairs", "sampler", "w_min",
    "fit_lo", "fit_hi", "workers", "save_graphs", "measurements",
}


def parse_plan(text: str, path="<plan>") -> ExperimentPlan:
    kv = parse_kv(text, path)
    unknown = set(kv) - _PLAN_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    if "n" not in kv:
        raise ValueError(f"{path}: key 'n' is required")

    def split(key: str, default: str) -> list[str]:
        return [p.strip() for p in kv.get(key, default).split(",") if p.strip()]

    return ExperimentPlan(
        n_values=tuple(int(x) for x in split("n", "")),
        beta_values=tuple(float(x) for x in split("beta", "2.5")),
        kernel_specs=tuple(split("kernel", "chung_lu")),
        seeds=int(kv.get("seeds", "1")),
        plan_seed=int(kv.get("plan_seed", "0")),
        pairs=int(kv.get("pairs", "2000")),
        sampler=tuple(split("sampler", "auto")),
        w_min=float(kv.get("w_min", "1.0")),
        fit_lo=int(kv.get("fit_lo", "5")),
        fit_hi=int(kv.get("fit_hi", "100")),
        workers=int(kv.get("workers", "1")),
        save_graphs=_parse_bool(kv.get("save_graphs", "false")),
        measurements=tuple(split("measurements", "degree,components,core,distance")),
    )
