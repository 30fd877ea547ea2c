"""Kinetic indicator and the pressure decomposition profile.

The kinetic function f(x, xi) = 1[xi < u(x)] is exactly 0/1 on the mesh.
After averaging over a few cells, f(1 - f) measures how far u is from a
two-valued profile.

For K > 1 the saturated region carries a pressure with
P'' + (chi/D)(K - 1)(1 - c) close to zero inside it.  The remainder mu
concentrates near the free boundary.
"""

import numpy as np

from stiffpress import KineticGrid, kinetic_two_valued_metric, mu_profile, preset, run_pme
from stiffpress.diagnostics import distance_to_edge, erode

for m in (2.0, 20.0, 100.0):
    cfg = preset("fig1", m=m, n_cells=100, t_final=5.0, snapshot_times=[5.0])
    s = run_pme(cfg).snapshots[-1]
    kg = KineticGrid.for_capacity(cfg.params.K)
    raw = kinetic_two_valued_metric(s.u, cfg.grid, KineticGrid(kg.xi_nodes, 1))
    print(f"m={m:5g}  windowed metric {kinetic_two_valued_metric(s.u, cfg.grid, kg):.3e}   raw {raw}")

cfg = preset("fig2", m=50.0, K=2.0, n_cells=200, t_final=2.0, snapshot_times=[2.0])
s = run_pme(cfg).snapshots[-1]
prof = mu_profile(s, cfg.params, cfg.grid)
core = erode(prof.interior, 2)
print(f"support {prof.support.sum()} cells, saturated interior {core.sum()} cells")
if core.any():
    print(f"mu on the interior: [{prof.mu[core].min():.3f}, {prof.mu[core].max():.3f}]")
d = distance_to_edge(prof.support)
for k in range(4):
    sel = prof.support & (d == k)
    if sel.any():
        print(f"  {k} cells from the edge: mean |mu| = {np.abs(prof.mu[sel]).mean():.3f}")
