"""Chemoattractant solve on a uniform mesh.

The signal c solves -c'' + c = u with zero-flux walls.  For u = cos(pi x)
the exact answer is cos(pi x) / (1 + pi^2), which lets us watch the
second-order convergence of the cell-centred scheme.
"""

import numpy as np

from stiffpress import build_grid, solve_chemo

print("  n      max error     ratio")
prev = None
for n in (25, 50, 100, 200, 400):
    g = build_grid(0.0, 1.0, n)
    x = g.centers
    err = np.max(np.abs(solve_chemo(np.cos(np.pi * x), g) - np.cos(np.pi * x) / (1 + np.pi**2)))
    print(f"{n:5d}  {err:.4e}" + (f"   {prev / err:.3f}" if prev else ""))
    prev = err

# The operator is an M-matrix: c inherits the bounds of u and its integral.
g = build_grid(0.0, 1.0, 200)
u = np.where(g.centers < 0.3, 1.0, 0.1)
c = solve_chemo(u, g)
print(f"u in [{u.min()}, {u.max()}], c in [{c.min():.4f}, {c.max():.4f}]")
print(f"integral of u = {u.sum() * g.h:.15f}, of c = {c.sum() * g.h:.15f}")
