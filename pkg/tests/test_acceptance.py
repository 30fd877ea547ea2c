"""Acceptance criteria 1-10.

Every test prints one ``PASS``/``FAIL`` line, repeated in the terminal
summary.  Expensive runs are shared through module-scoped fixtures, and
each fixture records its own wall time for the runtime budgets.
"""

import os
import time

import numpy as np
import pytest

from stiffpress import (
    KineticGrid,
    ModelParams,
    build_grid,
    complementarity_residual,
    kinetic_two_valued_metric,
    make_state,
    mu_profile,
    preset,
    pressure_sup_bound_check,
    run_hyperbolic,
    run_pme,
    solve_chemo,
    stable_dt,
    step_hyperbolic,
    step_pme,
)
from stiffpress.diagnostics import distance_to_edge, erode
from stiffpress.harness import compare_to_limit, run_sweep
from stiffpress.hyperbolic import llf_flux
from stiffpress.oracles import dense_hyperbolic_step, dense_pme_step, llf_flux_loop

pytestmark = pytest.mark.acceptance

FIG1_M = (2.0, 5.0, 100.0)
FIG1_TIMES = (0.0, 5.0, 20.0)
SWEEP_M = (2.0, 5.0, 20.0, 100.0)
SWEEP_K = (0.6, 1.0)


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def fig1_runs():
    runs = {}
    for m in FIG1_M:
        cfg = preset("fig1", m=m, n_cells=200, t_final=20.0, snapshot_times=FIG1_TIMES)
        runs[m] = timed(run_pme, cfg)
    return runs


@pytest.fixture(scope="module")
def fig1_limit():
    cfg = preset("fig1", n_cells=200, t_final=20.0, snapshot_times=FIG1_TIMES, solver="hyperbolic")
    return timed(run_hyperbolic, cfg)


def _sweep(path, threads_env):
    old = os.environ.get("STIFFPRESS_THREADS")
    os.environ["STIFFPRESS_THREADS"] = threads_env
    try:
        return timed(run_sweep, preset("fig2"), list(SWEEP_M), list(SWEEP_K), csv_path=path)
    finally:
        if old is None:
            del os.environ["STIFFPRESS_THREADS"]
        else:
            os.environ["STIFFPRESS_THREADS"] = old


@pytest.fixture(scope="module")
def fig2_sweep(tmp_path_factory):
    path = tmp_path_factory.mktemp("sweep") / "sweep_threads1.csv"
    rows, seconds = _sweep(path, "1")
    return rows, seconds, path


@pytest.fixture(scope="module")
def fig2_saturating():
    """``fig2`` parameters with ``K = 2`` for every exponent used by criteria 6 and 7."""
    runs = {}
    for m in (4.0, 5.0, 8.0, 16.0, 20.0, 32.0, 100.0):
        cfg = preset("fig2", m=m, K=2.0, t_final=5.0, snapshot_times=[5.0])
        runs[m] = timed(run_pme, cfg)
    return runs


def test_c1_elliptic_accuracy(acceptance_report):
    start = time.perf_counter()
    errors = {}
    for n in (50, 100, 200, 400):
        g = build_grid(0.0, 1.0, n)
        x = g.centers
        errors[n] = float(np.max(np.abs(solve_chemo(np.cos(np.pi * x), g) - np.cos(np.pi * x) / (1 + np.pi**2))))
    seconds = time.perf_counter() - start
    ratios = [errors[n] / errors[2 * n] for n in (50, 100, 200)]
    ok = errors[200] < 1e-3 and all(abs(r - 4.0) <= 0.8 for r in ratios) and seconds < 1.0
    acceptance_report(
        "C1 elliptic accuracy",
        ok,
        f"err(200)={errors[200]:.3e}, ratios={[round(r, 4) for r in ratios]}, {seconds:.3f}s",
    )
    assert ok


def test_c2_conservation_and_bounds(fig1_runs, acceptance_report):
    details, ok = [], True
    for m, (res, seconds) in fig1_runs.items():
        u_min = res.record_array("u_min").min()
        u_max = res.record_array("u_max").max()
        clip = res.clipped.max(initial=0.0) / res.initial_mass
        good = (
            res.mass_drift <= 1e-8
            and u_min >= 0.0
            and u_max <= res.config.params.K
            and clip <= 1e-10
            and seconds < 120.0
        )
        ok &= good
        details.append(f"m={m:g}: drift={res.mass_drift:.1e} u in [{u_min:.4f},{u_max:.4f}] clip={clip:.1e} {seconds:.0f}s")
    acceptance_report("C2 conservation & bounds", ok, "; ".join(details))
    assert ok


def test_c3_oracle_equivalence(acceptance_report):
    start = time.perf_counter()
    g = build_grid(0.0, 1.0, 8)
    p = ModelParams(m=3.0, K=1.0, chi=5.0, D=1.0, newton_tol=1e-13)
    u0 = 0.5 - 0.3 * np.cos(np.pi * g.centers) + 0.05 * np.sin(7 * g.centers)
    s, ref = make_state(0.0, u0, p, g), u0.copy()
    for _ in range(10):
        dt = stable_dt(s, p, g)
        s = step_pme(s, p, g, dt)
        ref, _ = dense_pme_step(ref, g.h, dt, p.m, p.K, p.chi, p.D)
    pme_err = float(np.max(np.abs(s.u - ref)))

    ph = ModelParams(K=1.0, chi=40.0)
    sh = make_state(0.0, u0, ph, g)
    F, _ = llf_flux(sh.u, sh.c, ph, g)
    flux_err = float(np.max(np.abs(F - llf_flux_loop(sh.u, sh.c, ph.K, ph.chi, g.h))))
    dt = stable_dt(sh, ph, g)
    hyp_err = float(np.max(np.abs(step_hyperbolic(sh, ph, g, dt).u - dense_hyperbolic_step(sh.u, g.h, dt, ph.K, ph.chi))))
    seconds = time.perf_counter() - start
    ok = pme_err <= 1e-9 and flux_err <= 1e-12 and hyp_err <= 1e-12 and seconds < 1.0
    acceptance_report(
        "C3 oracle equivalence",
        ok,
        f"pme 10 steps {pme_err:.1e}, LLF flux {flux_err:.1e}, LLF step {hyp_err:.1e}, {seconds:.3f}s",
    )
    assert ok


def test_c4_incompressible_limit_trend(fig1_runs, fig1_limit, acceptance_report):
    limit, limit_seconds = fig1_limit
    g = limit.config.grid
    dist = {}
    for m, (res, _) in fig1_runs.items():
        pairs = compare_to_limit(res.snapshots, limit.snapshots, g, res.config.params.K)
        dist[m] = {t: d for t, d in pairs}
    seconds = limit_seconds + sum(sec for _, sec in fig1_runs.values())
    ok = seconds < 300.0
    parts = []
    for t in (5.0, 20.0):
        d = [dist[m][t] for m in FIG1_M]
        ok &= d[0] > d[1] > d[2] and d[2] <= 0.5 * d[0]
        parts.append(f"t={t:g}: " + ", ".join(f"{x:.4f}" for x in d))
    acceptance_report("C4 incompressible-limit trend", ok, "; ".join(parts) + f"; {seconds:.0f}s")
    assert ok


def test_c5_stiff_pressure_vanishing(fig2_sweep, acceptance_report):
    rows, seconds, _ = fig2_sweep
    t_end = max(r.t for r in rows)
    assert all(r.status == "ok" for r in rows)
    G = [next(r.grad_P_energy for r in rows if r.m == m and r.K == 1.0 and r.t == t_end) for m in SWEEP_M]
    g_ok = all(a >= b for a, b in zip(G, G[1:])) and G[-1] <= 0.5 * G[0]
    bound_ok = True
    for r in rows:
        if r.K == 0.6:
            bound = pressure_sup_bound_check(ModelParams(m=r.m, K=0.6))
            bound_ok &= r.max_P <= bound
    p20 = max(r.max_P for r in rows if r.K == 0.6 and r.m == 20.0)
    ok = g_ok and bound_ok and p20 < 1e-4 and seconds < 300.0
    acceptance_report(
        "C5 stiff-pressure vanishing",
        ok,
        f"K=1 G(m)={[round(x, 4) for x in G]}; K=0.6 bound held={bound_ok}, max P(m=20)={p20:.4e}; {seconds:.0f}s",
    )
    assert ok


def test_c6_complementarity(fig2_saturating, acceptance_report):
    residual, seconds = {}, 0.0
    for m in (5.0, 20.0, 100.0):
        res, sec = fig2_saturating[m]
        s = res.snapshot_at(5.0)
        residual[m] = complementarity_residual(s, res.config.params, res.config.grid)[1]
        seconds += sec
    r = [residual[m] for m in (5.0, 20.0, 100.0)]
    ok = r[0] > r[1] > r[2] and r[2] <= 0.3 * r[0] and seconds < 300.0
    acceptance_report(
        "C6 complementarity",
        ok,
        f"residual(m=5,20,100)={[round(x, 4) for x in r]}, ratio={r[2] / r[0]:.3f}; {seconds:.0f}s",
    )
    assert ok


def test_c7_excess_saturation_rate(fig2_saturating, acceptance_report):
    ms = (4.0, 8.0, 16.0, 32.0)
    E = [fig2_saturating[m][0].totals_until(5.0)["excess_sat_total"] for m in ms]
    seconds = sum(fig2_saturating[m][1] for m in ms)
    ok = all(a >= b for a, b in zip(E, E[1:])) and E[-1] <= 0.3 * E[0] and seconds < 300.0
    acceptance_report(
        "C7 excess saturation rate",
        ok,
        f"E(m=4,8,16,32)={[round(x, 4) for x in E]}, ratio={E[-1] / E[0]:.3f}; {seconds:.0f}s",
    )
    assert ok


def test_c8_kinetic_two_valuedness(fig1_runs, acceptance_report):
    start = time.perf_counter()
    metric, raw_max = {}, 0.0
    for m, (res, _) in fig1_runs.items():
        g, K = res.config.grid, res.config.params.K
        kg = KineticGrid.for_capacity(K)
        raw = KineticGrid(kg.xi_nodes, window_cells=1)
        metric[m] = kinetic_two_valued_metric(res.snapshot_at(5.0).u, g, kg)
        raw_max = max([raw_max] + [kinetic_two_valued_metric(s.u, g, raw) for s in res.snapshots])
    seconds = time.perf_counter() - start + max(sec for _, sec in fig1_runs.values())
    w = [metric[m] for m in FIG1_M]
    ok = w[0] > w[1] > w[2] and raw_max == 0.0 and seconds < 120.0
    acceptance_report(
        "C8 kinetic two-valuedness",
        ok,
        f"windowed metric(m=2,5,100)={[f'{x:.3e}' for x in w]}, raw metric max={raw_max}",
    )
    assert ok


@pytest.fixture(scope="module")
def fig2_fine():
    cfg = preset("fig2", m=100.0, K=2.0, n_cells=400, t_final=5.0, snapshot_times=[5.0])
    return timed(run_pme, cfg)


def test_c9_decomposition_measure_profile(fig2_fine, acceptance_report):
    res, seconds = fig2_fine
    cfg = res.config
    g, p = cfg.grid, cfg.params
    prof = mu_profile(res.snapshot_at(5.0), p, g)
    tol = 10.0 * g.h
    core = erode(prof.interior, 2)
    interior_dev = float(np.abs(prof.mu[core]).max()) if core.any() else 0.0
    support_min = float(prof.mu[prof.support].min()) if prof.support.any() else 0.0
    ok = core.any() and interior_dev <= tol and support_min >= -tol and seconds < 120.0
    acceptance_report(
        "C9 decomposition-measure profile",
        ok,
        f"|mu| on eroded interior ({core.sum()} cells) max={interior_dev:.3f}, "
        f"min mu on support ({prof.support.sum()} cells)={support_min:.3f}, tol={tol:.3f}; {seconds:.0f}s",
    )
    assert ok


def test_c10_determinism(fig2_sweep, tmp_path, acceptance_report):
    _, _, first = fig2_sweep
    second = tmp_path / "sweep_threads2.csv"
    _sweep(second, "2")
    same = first.read_bytes() == second.read_bytes()
    acceptance_report(
        "C10 determinism",
        same,
        f"STIFFPRESS_THREADS=1 vs 2: {'byte-identical' if same else 'different'} ({len(first.read_bytes())} bytes)",
    )
    assert same


# Properties stated alongside the criteria, checked on the same runs.


def test_convexity_bound_on_every_snapshot(fig1_runs, fig2_saturating):
    for res, _ in list(fig1_runs.values()) + list(fig2_saturating.values()):
        m = res.config.params.m
        for s in res.snapshots:
            assert np.all(m * np.maximum(s.u - 1.0, 0.0) <= s.u**m)


def test_pressure_law_holds_on_every_snapshot(fig1_runs, fig2_saturating):
    for res, _ in list(fig1_runs.values()) + list(fig2_saturating.values()):
        m = res.config.params.m
        for s in res.snapshots:
            assert np.array_equal(s.P, (m / (m - 1.0)) * s.u ** (m - 1.0))


def test_limit_run_conserves_mass(fig1_limit):
    res, _ = fig1_limit
    assert res.mass_drift <= 1e-11


def test_defect_total_uniformly_bounded(fig1_runs):
    totals = {m: res.totals_until(20.0)["defect_total"] for m, (res, _) in fig1_runs.items()}
    assert all(v >= 0 for v in totals.values())
    assert all(v <= 10 * totals[2.0] for v in totals.values()), totals


def test_decomposition_measure_concentrates_at_free_boundary(fig2_fine):
    res, _ = fig2_fine
    cfg = res.config
    prof = mu_profile(res.snapshot_at(5.0), cfg.params, cfg.grid)
    large = prof.support & (np.abs(prof.mu) > 10.0 * cfg.grid.h)
    assert np.all(distance_to_edge(prof.support)[large] <= 3)
