"""Convergence towards the hyperbolic limit for K = 1.

As m grows, the porous-medium density approaches the solution of the
conservation law u_t + chi (u (1 - u) c_x)_x = 0, computed here by a
separate local Lax-Friedrichs solver on the same mesh.
"""

from stiffpress import preset, run_hyperbolic, run_pme
from stiffpress.harness import compare_to_limit

times = [0.0, 2.0, 5.0]
base = preset("fig1", n_cells=100, t_final=5.0, snapshot_times=times)
limit = run_hyperbolic(base)

print("   m    " + "   ".join(f"L1 at t={t:g}" for t in times[1:]))
for m in (2.0, 5.0, 20.0, 100.0):
    res = run_pme(base.with_params(m=m))
    dist = compare_to_limit(res.snapshots, limit.snapshots, base.grid, base.params.K)
    print(f"{m:5g}   " + "    ".join(f"{d:.5f}" for _, d in dist[1:]))
