"""Command-line interface.

Subcommands: generate, analyze, verify, experiment.
Exit codes: 0 success, 1 validation failure (including a failed verify),
2 I/O error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analysis
from .config import parse_model_config, parse_plan
from .harness import run_experiment
from .kernels import verify_ep1, verify_ep2
from .pairrng import mix64
from .sampler import generate, read_graph, write_graph
from .weights import read_weights, verify_power_law


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract here is exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="girg-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="sample a graph from a model config")
    gen.add_argument("--config", required=True, help="model config file")
    gen.add_argument("--seed", type=int, default=None, help="override the config seed")
    gen.add_argument("--out", default="graph.g", help="output graph file")

    ana = sub.add_parser("analyze", help="measure a graph file, write report CSVs")
    ana.add_argument("graph", help="graph file")
    ana.add_argument("--out", required=True, help="output directory")
    ana.add_argument("--pairs", type=int, default=2000)
    ana.add_argument("--seed", type=int, default=0)
    ana.add_argument("--fit-lo", type=int, default=5)
    ana.add_argument("--fit-hi", type=int, default=100)

    ver = sub.add_parser("verify", help="check weight / kernel conditions")
    ver.add_argument("--weights", help="weight file to check")
    ver.add_argument("--config", help="model config: sample weights, check kernel marginals")
    ver.add_argument("--eta", type=float, default=None)
    ver.add_argument("--c1", type=float, default=None)
    ver.add_argument("--c2", type=float, default=None)
    ver.add_argument("--delta", type=float, default=0.1)
    ver.add_argument("--ep1-samples", type=int, default=20000)
    ver.add_argument("--seed", type=int, default=0)

    exp = sub.add_parser("experiment", help="run an experiment plan")
    exp.add_argument("--config", required=True, help="plan file")
    exp.add_argument("--out", required=True, help="output directory")
    exp.add_argument("--workers", type=int, default=None)
    return parser


def _cmd_generate(args) -> int:
    with open(args.config) as fh:
        config = parse_model_config(fh.read(), args.config)
    if args.seed is not None:
        from dataclasses import replace

        config = replace(config, seed=args.seed)
    graph = generate(config)
    write_graph(graph, args.out)
    print(f"wrote {args.out}: n={graph.n} m={graph.edge_count} kernel={config.label()}")
    return 0


def _cmd_analyze(args) -> int:
    import os

    graph = read_graph(args.graph)
    os.makedirs(args.out, exist_ok=True)
    deg = analysis.degree_report(graph, (args.fit_lo, args.fit_hi))
    deg.to_csv(os.path.join(args.out, "degree.csv"))
    comp = analysis.components(graph)
    with open(os.path.join(args.out, "components.csv"), "w") as fh:
        fh.write("n,m,components,giant_size,giant_fraction,second_size\n")
        fh.write(
            f"{graph.n},{graph.edge_count},{comp.count},{int(comp.sizes[0])},"
            f"{comp.giant_fraction!r},{comp.second_size}\n"
        )
    core = analysis.core_report(graph)
    with open(os.path.join(args.out, "core.csv"), "w") as fh:
        fh.write("w_bar,core_vertices,core_connected,core_diameter\n")
        fh.write(
            f"{graph.weights.w_bar!r},{core.core_vertices},"
            f"{int(core.core_connected)},{core.core_diameter}\n"
        )
    dist = analysis.distance_report(graph, args.pairs, seed=args.seed)
    kern = graph.meta.get("kernel", "file")
    with open(os.path.join(args.out, "distance.csv"), "w") as fh:
        fh.write("n,beta,kernel,seed,pairs,mean,stderr,target,ratio,diam_lb\n")
        fh.write(
            f"{graph.n},{graph.weights.beta!r},{kern},{args.seed},{dist.sampled_pairs},"
            f"{dist.mean_distance!r},{dist.stderr!r},{dist.target!r},"
            f"{dist.ratio!r},{dist.diameter_estimate}\n"
        )
    print(
        f"n={graph.n} m={graph.edge_count} slope={deg.fitted_slope:.3f} "
        f"giant={comp.giant_fraction:.3f} core_diam={core.core_diameter} "
        f"mean_dist={dist.mean_distance:.3f} (target {dist.target:.3f})"
    )
    return 0


def _cmd_verify(args) -> int:
    if not args.weights and not args.config:
        raise ValueError("verify needs --weights and/or --config")
    from .weights import DEFAULT_C1, DEFAULT_C2, DEFAULT_ETA

    eta = args.eta if args.eta is not None else DEFAULT_ETA
    c1 = args.c1 if args.c1 is not None else DEFAULT_C1
    c2 = args.c2 if args.c2 is not None else DEFAULT_C2
    ok = True

    if args.weights:
        ws = read_weights(args.weights)
        rep = verify_power_law(ws, eta=eta, c1=c1, c2=c2)
        _print_pl(rep)
        ok &= rep.passed

    if args.config:
        with open(args.config) as fh:
            config = parse_model_config(fh.read(), args.config)
        ws = config.sample_weights()
        rep = verify_power_law(ws, eta=eta, c1=c1, c2=c2)
        _print_pl(rep)
        ok &= rep.passed

        rng = np.random.default_rng(args.seed)
        worst = (1.0, None)
        for i in range(8):
            q_target = 10.0 ** rng.uniform(-3, 0.5)
            w_u = max(ws.w_min, min(ws.w_max, (q_target * ws.total) ** 0.5))
            x_u = rng.random(config.d)
            ep1 = verify_ep1(
                config.kernel, w_u, w_u, ws.total, x_u,
                n_samples=args.ep1_samples, seed=mix64(args.seed, i),
            )
            if abs(ep1.ratio - 1.0) > abs(worst[0] - 1.0):
                worst = (ep1.ratio, ep1)
        print(f"EP1: worst marginal/product ratio over 8 spot checks = {worst[0]:.3f}")
        ep1_ok = 0.25 <= worst[0] <= 4.0
        print(f"EP1: {'PASS' if ep1_ok else 'FAIL'} (required within [0.25, 4])")
        ok &= ep1_ok

        try:
            ep2 = verify_ep2(
                config.kernel, ws, eta=eta, delta=args.delta,
                seed=args.seed, d=config.d,
            )
            verdict = "satisfied" if ep2.passed else "NOT satisfied"
            print(
                f"EP2 (diagnostic): min heavy-pair p = {ep2.min_p:.3e}, "
                f"bound = {ep2.bound:.3e} -> {verdict} at delta={args.delta:g}"
            )
        except ValueError as exc:
            print(f"EP2 (diagnostic): skipped ({exc})")

    print(f"verify: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _print_pl(rep) -> None:
    print(
        f"PL1: {'PASS' if rep.pl1_pass else 'FAIL'} | "
        f"PL2 lower: {'PASS' if rep.pl2_lower_pass else 'FAIL'} "
        f"(worst count ratio {rep.worst_ratio_lower:.3f} >= c1={rep.c1:g} at w={rep.worst_lower_at:.3g}) | "
        f"PL2 upper: {'PASS' if rep.pl2_upper_pass else 'FAIL'} "
        f"(worst count ratio {rep.worst_ratio_upper:.3f} <= c2={rep.c2:g} at w={rep.worst_upper_at:.3g})"
    )


def _cmd_experiment(args) -> int:
    with open(args.config) as fh:
        plan = parse_plan(fh.read(), args.config)
    if args.workers is not None:
        from dataclasses import replace

        plan = replace(plan, workers=args.workers)
    result = run_experiment(plan, args.out)
    n_err = sum(1 for r in result["rows"] if r["error"])
    print(
        f"experiment: {len(result['rows'])} runs, {n_err} errors; "
        f"rows -> {result['paths']['rows']}"
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        raise ValueError(f"unknown command {args.command!r}")
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, IOError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
