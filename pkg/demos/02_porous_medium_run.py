"""A single porous-medium run with chemotactic aggregation.

Cosine-perturbed data of mean 0.5 with chi = 40 and K = 1.  For m = 2
diffusion wins and the perturbation decays; for large m the density
gathers into a single aggregate close to capacity next to vacuum.
"""

import numpy as np

from stiffpress import preset, run_pme

for m in (2.0, 20.0):
    cfg = preset("fig1", m=m, n_cells=100, t_final=5.0, snapshot_times=[0.0, 1.0, 5.0])
    res = run_pme(cfg)
    print(f"m={m:g}: {res.n_steps} steps, mass drift {res.mass_drift:.2e}, max clipped {res.clipped.max():.1e}")
    for s in res.snapshots:
        dense = np.mean(s.u > 0.9)
        print(f"   t={s.t:4g}  u in [{s.u.min():.4f}, {s.u.max():.4f}]  fraction above 0.9: {dense:.2f}  max P {s.P.max():.3f}")

# Density profile of the last snapshot, coarsely
s = res.snapshots[-1]
bars = " .:-=+*#%@"
print("".join(bars[min(int(v * 10), 9)] for v in s.u))
