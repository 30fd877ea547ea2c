"""Pressure behaviour for capacities below, at and above one.

* K < 1: the density never exceeds K, so P <= m/(m-1) K^(m-1), which
  vanishes as m grows.
* K = 1: the pressure-gradient energy fades with m.
* K > 1: the density may exceed one; the excess (u - 1)_+ shrinks like
  1/m, and the pressure satisfies a complementarity relation in the limit.
"""

from stiffpress import ModelParams, complementarity_residual, preset, pressure_sup_bound_check, run_pme

base = preset("fig2", n_cells=100, t_final=2.0, snapshot_times=[2.0])

print("K = 0.6")
for m in (2.0, 5.0, 20.0):
    res = run_pme(base.with_params(m=m, K=0.6))
    top = res.totals_until(2.0)["max_P"]
    print(f"  m={m:4g}  max P = {top:.4e}   ceiling = {pressure_sup_bound_check(ModelParams(m=m, K=0.6)):.4e}")

print("K = 1")
for m in (2.0, 5.0, 20.0):
    res = run_pme(base.with_params(m=m, K=1.0))
    print(f"  m={m:4g}  int |P_x|^2 = {res.totals_until(2.0)['grad_P_energy']:.4f}")

print("K = 2")
for m in (5.0, 20.0, 50.0):
    res = run_pme(base.with_params(m=m, K=2.0))
    s = res.snapshots[-1]
    _, resid = complementarity_residual(s, res.config.params, res.config.grid)
    excess = res.totals_until(2.0)["excess_sat_total"]
    print(f"  m={m:4g}  ||(u-1)_+|| = {excess:.4f}   complementarity residual = {resid:.4f}")
