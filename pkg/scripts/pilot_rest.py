"""Pilot: distance ratio trend, m/n stability, weight-law constants, EP1."""
import math
import time

import numpy as np

import girglab as gl
from girglab import analysis
from girglab.weights import verify_power_law, sample_weights, pareto_mean

# --- criterion 6 series: threshold d=2, naive@1e4,1e5 + grid@1e6 ------------
print("== distance ratio trend (threshold d=2) ==")
kern = gl.ThresholdKernel(norm=gl.Norm.MAX)
for n, sampler in ((10_000, "naive"), (100_000, "naive"), (1_000_000, "grid")):
    ratios = []
    t0 = time.time()
    for s in range(5):
        cfg = gl.ModelConfig(n=n, beta=2.5, d=2, kernel=kern, seed=1000 + s, sampler=sampler)
        g = gl.generate(cfg)
        rep = analysis.distance_report(g, 2000, seed=s)
        ratios.append(rep.ratio)
    print(f"n={n:>8} {sampler:>5}: ratios {['%.3f' % r for r in ratios]} mean={np.mean(ratios):.4f}  [{time.time()-t0:.0f}s]")

# --- criterion 2: m/n across n, chung_lu --------------------------------------
print("== m/n across n (chung_lu) ==")
for n in (1000, 10_000, 100_000):
    ms = []
    for s in range(3):
        cfg = gl.ModelConfig(n=n, beta=2.5, d=1, kernel=gl.ChungLu(), seed=2000 + s, sampler="naive")
        g = gl.generate(cfg)
        ms.append(g.edge_count / n)
    print(f"n={n:>7}: m/n {['%.3f' % x for x in ms]} mean={np.mean(ms):.4f}")

# --- criterion 11: PL pass rates over 100 seeds -------------------------------
print("== weight law over 100 seeds (n=1e5, beta=2.5, eta=0.1) ==")
lows, ups, means = [], [], []
for s in range(100):
    ws = sample_weights(100_000, 2.5, seed=s)
    rep = verify_power_law(ws, eta=0.1, c1=1e-9, c2=1e9)
    lows.append(rep.worst_ratio_lower)
    ups.append(rep.worst_ratio_upper)
    means.append(ws.total / len(ws))
lows, ups, means = map(np.array, (lows, ups, means))
print(f"lower ratio: min={lows.min():.4f} p1={np.quantile(lows, 0.01):.4f} median={np.median(lows):.4f}")
print(f"upper ratio: max={ups.max():.2f} p99={np.quantile(ups, 0.99):.2f} median={np.median(ups):.2f}")
print(f"mean weight: min={means.min():.4f} max={means.max():.4f} (pareto mean {pareto_mean(2.5):.1f})")
print(f"with c1=0.4, c2=32: pass {np.sum((lows >= 0.4) & (ups <= 32.0))}/100")

# --- EP1 ratios across kernels -------------------------------------------------
print("== EP1 ratio ranges (20 random configs per kernel, d in {1,2}) ==")
rng = np.random.default_rng(99)
for kern in (gl.ChungLu(), gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX),
             gl.DistanceKernel(alpha=0.5, norm=gl.Norm.EUCLIDEAN),
             gl.ThresholdKernel(norm=gl.Norm.MIN_COMPONENT),
             gl.ThresholdKernel(norm=gl.Norm.MAX, c_low=0.5, c_high=1.5)):
    worst_lo, worst_hi = np.inf, 0.0
    for d in (1, 2):
        for i in range(20):
            q = 10 ** rng.uniform(-4, 1)
            W = 1000.0
            w_u = math.sqrt(q * W)
            x_u = rng.random(d)
            ns = int(min(5e6, max(1e4, 500 / min(q, 1.0))))
            rep = gl.verify_ep1(kern, w_u, w_u, W, x_u, n_samples=ns, seed=int(rng.integers(1 << 40)))
            worst_lo = min(worst_lo, rep.ratio)
            worst_hi = max(worst_hi, rep.ratio)
    name = getattr(kern, "name", "?")
    print(f"{name:>10} {getattr(getattr(kern, 'norm', None), 'value', '-'):>13}: ratio in [{worst_lo:.3f}, {worst_hi:.3f}]")
