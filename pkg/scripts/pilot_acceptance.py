"""Pilot the acceptance-critical statistics; used to freeze test constants."""
import math
import sys
import time

import numpy as np

import girglab as gl
from girglab import analysis

KERNELS = [
    ("chung_lu", gl.ChungLu(), 1, "naive"),
    ("distance_d1_max", gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX), 1, "grid"),
    ("distance_d2_min", gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MIN_COMPONENT), 2, "grid"),
    ("threshold_d2", gl.ThresholdKernel(norm=gl.Norm.MAX), 2, "grid"),
]

N = 100_000
BETA = 2.5
SEEDS = list(range(10))
ln = math.log
ln3 = ln(N) ** 3

for name, kern, d, sampler in KERNELS:
    slopes, giants, seconds_, cores = [], [], [], []
    t0 = time.time()
    for s in SEEDS:
        cfg = gl.ModelConfig(n=N, beta=BETA, d=d, kernel=kern, seed=s, sampler=sampler)
        g = gl.generate(cfg)
        if s < 5:
            deg = analysis.degree_report(g, (5, 100))
            slopes.append(deg.fitted_slope)
        comp = analysis.components(g)
        giants.append(comp.giant_fraction)
        seconds_.append(comp.second_size)
        core = analysis.core_report(g)
        cores.append((core.core_vertices, core.core_connected, core.core_diameter))
        if name == "chung_lu" and s == 0:
            wbar = g.weights.w_bar
            thr = ln(N) ** 2
            vs = np.flatnonzero(g.weights.values >= thr)
            cap = math.ceil(1.5 * ln(ln(N)) / abs(ln(0.5))) + 1
            reach = 0
            for v in vs:
                path, hit = gl.greedy_path(g, int(v))
                if hit and len(path) - 1 <= cap:
                    reach += 1
            print(f"  greedy: {reach}/{vs.size} reach core within {cap} steps "
                  f"(w_bar={wbar:.1f}, ln^2 n={thr:.1f})")
    dt = time.time() - t0
    print(f"{name}: {dt:.0f}s  slopes={['%.3f' % x for x in slopes]}")
    print(f"  giant min={min(giants):.3f}  second max={max(seconds_)} (ln^3 n = {ln3:.0f})")
    conn = [c for _, c, _ in cores]
    diam = [dd for _, _, dd in cores]
    sizes = [k for k, _, _ in cores]
    print(f"  core sizes {min(sizes)}..{max(sizes)}; connected {sum(conn)}/10; diam max={max(diam)}  all={diam}")
