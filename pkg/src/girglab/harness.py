"""Experiment orchestration: run a plan over (n, beta, kernel) cells, collect
per-run CSV rows, aggregate per cell, and emit an SVG of mean distance
against ln ln n with the reference line overlaid.

Per-run seeds come from mix64(plan_seed, cell_index, replicate_index), so a
plan is reproducible row by row no matter how many workers execute it.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from xml.sax.saxutils import escape

from . import analysis
from .config import ExperimentPlan, parse_kernel_spec
from .kernels import supports_grid
from .pairrng import MASK64, mix64
from .sampler import ModelConfig, generate, write_graph

ROW_COLUMNS = (
    "n,beta,kernel,sampler,seed,m,mean_degree,max_degree,slope,slope_stderr,"
    "giant_fraction,second_size,core_size,core_connected,core_diameter,"
    "pairs,mean_distance,stderr,target,ratio,diam_lb,candidates,error"
)

AGG_COLUMNS = (
    "n,beta,kernel,runs,errors,mean_m_over_n,mean_giant_fraction,mean_slope,"
    "mean_distance,mean_ratio,stderr_ratio"
)


def cell_seed(plan_seed: int, cell_index: int, replicate: int) -> int:
    """Published derivation of per-run seeds; keep in sync with the docs."""
    return mix64(plan_seed, cell_index, replicate) & MASK64


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def run_cell(
    plan: ExperimentPlan, cell_index: int, n: int, beta: float, spec: str,
    sampler_mode: str, replicate: int, out_dir: str | None = None,
) -> dict:
    """Generate and measure one (cell, replicate); returns a row dict."""
    kernel, d = parse_kernel_spec(spec)
    if sampler_mode == "auto":
        sampler = "grid" if supports_grid(kernel) else "naive"
    else:
        sampler = sampler_mode
    seed = cell_seed(plan.plan_seed, cell_index, replicate)
    row = {
        "n": n, "beta": beta, "kernel": spec, "sampler": sampler, "seed": seed,
        "error": "",
    }
    try:
        config = ModelConfig(
            n=n, beta=beta, w_min=plan.w_min, d=d, kernel=kernel,
            seed=seed, sampler=sampler,
        )
        graph = generate(config)
        row["m"] = graph.edge_count
        row["candidates"] = graph.meta.get("candidates")
        if "degree" in plan.measurements:
            try:
                deg = analysis.degree_report(graph, (plan.fit_lo, plan.fit_hi))
                row.update(
                    mean_degree=deg.mean_degree, max_degree=deg.max_degree,
                    slope=deg.fitted_slope, slope_stderr=deg.slope_stderr,
                )
            except ValueError:
                row.update(mean_degree=2.0 * graph.edge_count / graph.n)
        if "components" in plan.measurements:
            comp = analysis.components(graph)
            row.update(giant_fraction=comp.giant_fraction, second_size=comp.second_size)
        if "core" in plan.measurements:
            core = analysis.core_report(graph)
            row.update(
                core_size=core.core_vertices,
                core_connected=core.core_connected,
                core_diameter=core.core_diameter,
            )
        if "distance" in plan.measurements:
            dist = analysis.distance_report(graph, plan.pairs, seed=mix64(seed, 5))
            row.update(
                pairs=dist.sampled_pairs, mean_distance=dist.mean_distance,
                stderr=dist.stderr, target=dist.target, ratio=dist.ratio,
                diam_lb=dist.diameter_estimate,
            )
        if plan.save_graphs and out_dir is not None:
            gdir = os.path.join(out_dir, "graphs")
            os.makedirs(gdir, exist_ok=True)
            write_graph(graph, os.path.join(gdir, f"cell{cell_index}_rep{replicate}.g"))
    except Exception as exc:  # recorded, run continues
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_experiment(plan: ExperimentPlan, out_dir: str) -> dict:
    """Execute every cell x replicate; write rows.csv, aggregate.csv, plots.

    Returns {"rows": [...], "aggregate": [...], "paths": {...}}.
    """
    os.makedirs(out_dir, exist_ok=True)
    jobs = []
    for cell_index, n, beta, spec, sampler_mode in plan.cells():
        for rep in range(plan.seeds):
            jobs.append((cell_index, n, beta, spec, sampler_mode, rep))

    def work(job):
        cell_index, n, beta, spec, sampler_mode, rep = job
        return run_cell(plan, cell_index, n, beta, spec, sampler_mode, rep, out_dir)

    if plan.workers > 1:
        with ThreadPoolExecutor(max_workers=plan.workers) as pool:
            rows = list(pool.map(work, jobs))
    else:
        rows = [work(job) for job in jobs]

    cols = ROW_COLUMNS.split(",")
    rows_path = os.path.join(out_dir, "rows.csv")
    with open(rows_path, "w") as fh:
        fh.write(ROW_COLUMNS + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row.get(c)) for c in cols) + "\n")

    aggregate = _aggregate(plan, rows)
    agg_path = os.path.join(out_dir, "aggregate.csv")
    acols = AGG_COLUMNS.split(",")
    with open(agg_path, "w") as fh:
        fh.write(AGG_COLUMNS + "\n")
        for arow in aggregate:
            fh.write(",".join(_fmt(arow.get(c)) for c in acols) + "\n")

    plot_dir = os.path.join(out_dir, "plots")
    os.makedirs(plot_dir, exist_ok=True)
    svg_path = os.path.join(plot_dir, "distance_vs_loglogn.svg")
    _render_distance_svg(aggregate, svg_path)
    return {
        "rows": rows,
        "aggregate": aggregate,
        "paths": {"rows": rows_path, "aggregate": agg_path, "svg": svg_path},
    }


def _mean_err(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    mean = sum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var / len(vals))


def _aggregate(plan: ExperimentPlan, rows: list[dict]) -> list[dict]:
    out = []
    for cell_index, n, beta, spec, _mode in plan.cells():
        cell_rows = [r for r in rows if r["n"] == n and r["beta"] == beta and r["kernel"] == spec]
        good = [r for r in cell_rows if not r["error"]]
        mean_ratio, err_ratio = _mean_err([r.get("ratio") for r in good])
        mean_dist, _ = _mean_err([r.get("mean_distance") for r in good])
        mean_mn, _ = _mean_err([r["m"] / r["n"] for r in good if r.get("m") is not None])
        mean_gf, _ = _mean_err([r.get("giant_fraction") for r in good])
        mean_slope, _ = _mean_err([r.get("slope") for r in good])
        out.append(
            {
                "n": n, "beta": beta, "kernel": spec, "runs": len(cell_rows),
                "errors": len(cell_rows) - len(good), "mean_m_over_n": mean_mn,
                "mean_giant_fraction": mean_gf, "mean_slope": mean_slope,
                "mean_distance": mean_dist, "mean_ratio": mean_ratio,
                "stderr_ratio": err_ratio,
            }
        )
    return out


# --- SVG ---------------------------------------------------------------------

_SVG_W, _SVG_H = 720, 480
_ML, _MR, _MT, _MB = 70, 180, 30, 60
_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _render_distance_svg(aggregate: list[dict], path: str) -> None:
    """Mean distance vs ln ln n, one polyline per (beta, kernel), with the
    2 ln ln n / |ln(beta-2)| reference overlaid per beta (dashed)."""
    pts = [a for a in aggregate if a.get("mean_distance") is not None]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if pts:
        xs = [math.log(math.log(a["n"])) for a in pts]
        ys = [a["mean_distance"] for a in pts]
        betas = sorted({a["beta"] for a in pts})
        for b in betas:
            denom = abs(math.log(b - 2.0))
            ys.append(2.0 * min(xs) / denom)
            ys.append(2.0 * max(xs) / denom)
        x0, x1 = min(xs), max(xs)
        y0, y1 = 0.0, max(ys) * 1.08 + 1e-9
        if x1 - x0 < 1e-12:
            x0, x1 = x0 - 0.5, x1 + 0.5

        def sx(x):
            return _ML + (x - x0) / (x1 - x0) * (_SVG_W - _ML - _MR)

        def sy(y):
            return _SVG_H - _MB - (y - y0) / (y1 - y0) * (_SVG_H - _MT - _MB)

        ax_y = _SVG_H - _MB
        parts.append(
            f'<line x1="{_ML}" y1="{ax_y}" x2="{_SVG_W - _MR}" y2="{ax_y}" stroke="black"/>'
        )
        parts.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{ax_y}" stroke="black"/>')
        for a in sorted({(a["n"]) for a in pts}):
            x = sx(math.log(math.log(a)))
            parts.append(f'<line x1="{x:.2f}" y1="{ax_y}" x2="{x:.2f}" y2="{ax_y + 5}" stroke="black"/>')
            parts.append(
                f'<text x="{x:.2f}" y="{ax_y + 20}" font-size="11" text-anchor="middle">'
                f"n={a:g}</text>"
            )
        for t in range(0, int(y1) + 1, max(1, int(y1 // 6) or 1)):
            y = sy(t)
            parts.append(f'<line x1="{_ML - 5}" y1="{y:.2f}" x2="{_ML}" y2="{y:.2f}" stroke="black"/>')
            parts.append(
                f'<text x="{_ML - 9}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{t}</text>'
            )
        parts.append(
            f'<text x="{(_ML + _SVG_W - _MR) / 2:.2f}" y="{_SVG_H - 18}" font-size="12" '
            f'text-anchor="middle">ln ln n</text>'
        )
        parts.append(
            f'<text x="18" y="{(_MT + ax_y) / 2:.2f}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 18 {(_MT + ax_y) / 2:.2f})">mean distance</text>'
        )

        for b in betas:
            denom = abs(math.log(b - 2.0))
            parts.append(
                f'<line x1="{sx(x0):.2f}" y1="{sy(2 * x0 / denom):.2f}" '
                f'x2="{sx(x1):.2f}" y2="{sy(2 * x1 / denom):.2f}" '
                f'stroke="gray" stroke-dasharray="6 4"/>'
            )
            parts.append(
                f'<text x="{sx(x1) + 4:.2f}" y="{sy(2 * x1 / denom):.2f}" font-size="10" '
                f'fill="gray">2 ln ln n / |ln({b:g}-2)|</text>'
            )

        series = sorted({(a["beta"], a["kernel"]) for a in pts})
        for si, (b, kern) in enumerate(series):
            color = _SERIES_COLORS[si % len(_SERIES_COLORS)]
            spts = sorted(
                [a for a in pts if a["beta"] == b and a["kernel"] == kern],
                key=lambda a: a["n"],
            )
            coords = " ".join(
                f"{sx(math.log(math.log(a['n']))):.2f},{sy(a['mean_distance']):.2f}" for a in spts
            )
            if len(spts) > 1:
                parts.append(
                    f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
                )
            for a in spts:
                parts.append(
                    f'<circle cx="{sx(math.log(math.log(a["n"]))):.2f}" '
                    f'cy="{sy(a["mean_distance"]):.2f}" r="3" fill="{color}"/>'
                )
            parts.append(
                f'<text x="{_SVG_W - _MR + 10}" y="{_MT + 16 * si + 12}" font-size="11" '
                f'fill="{color}">{escape(f"beta={b:g} {kern}")}</text>'
            )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
