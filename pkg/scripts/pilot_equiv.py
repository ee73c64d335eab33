"""Distributional checks of the grid sampler against naive and exact marginals."""
import numpy as np
from scipy import stats

import girglab as gl

# 1) exact-marginal z-test: observed edges vs sum of per-pair probabilities,
#    evaluated with the python kernel path (independent of the njit samplers)
def ztest(kern, d, sampler, n=60, seeds=400):
    obs = 0.0
    exp = 0.0
    var = 0.0
    for s in range(seeds):
        cfg = gl.ModelConfig(n=n, beta=2.5, d=d, kernel=kern, seed=5000 + s, sampler=sampler)
        ws = cfg.sample_weights()
        pos = cfg.sample_positions()
        g = gl.generate(cfg, ws)
        obs += g.edge_count
        W = ws.total
        for u in range(n):
            for v in range(u + 1, n):
                p = gl.edge_probability(kern, ws.values[u], ws.values[v], W, pos[u], pos[v])
                exp += p
                var += p * (1 - p)
    z = (obs - exp) / max(np.sqrt(var), 1e-12)
    return obs, exp, z

for kern, d in [
    (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX), 2),
    (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MIN_COMPONENT), 2),
    (gl.DistanceKernel(alpha=1.5, norm=gl.Norm.MAX), 1),
    (gl.ThresholdKernel(norm=gl.Norm.MAX, c_low=0.5, c_high=1.5), 2),
]:
    for sampler in ("naive", "grid"):
        obs, exp, z = ztest(kern, d, sampler)
        print(f"{kern.name} {kern.norm.value} d={d} {sampler:>5}: obs={obs:.0f} exp={exp:.1f} z={z:+.2f}")

# 2) two-sample KS on degree distributions, naive seeds vs grid seeds
print("== degree KS naive-vs-grid ==")
for kern, d in [
    (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MAX), 2),
    (gl.DistanceKernel(alpha=2.0, norm=gl.Norm.MIN_COMPONENT), 2),
    (gl.ThresholdKernel(norm=gl.Norm.MAX), 2),
]:
    degs_n, degs_g = [], []
    mn, mg = [], []
    for s in range(100):
        cfg = gl.ModelConfig(n=1500, beta=2.5, d=d, kernel=kern, seed=s, sampler="naive")
        g = gl.generate(cfg)
        degs_n.append(g.degrees); mn.append(g.edge_count)
        cfg = gl.ModelConfig(n=1500, beta=2.5, d=d, kernel=kern, seed=10_000 + s, sampler="grid")
        g = gl.generate(cfg)
        degs_g.append(g.degrees); mg.append(g.edge_count)
    ks = stats.ks_2samp(np.concatenate(degs_n), np.concatenate(degs_g))
    mn, mg = np.array(mn), np.array(mg)
    se = np.sqrt(mn.var(ddof=1) / mn.size + mg.var(ddof=1) / mg.size)
    print(f"{kern.name} {kern.norm.value}: KS p={ks.pvalue:.3f}  mean m {mn.mean():.1f} vs {mg.mean():.1f} (diff/se={abs(mn.mean()-mg.mean())/se:.2f})")
