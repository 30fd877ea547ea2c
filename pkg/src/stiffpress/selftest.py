"""Quick built-in checks: the closed-form examples and the small dense-oracle comparisons."""

import math
from dataclasses import dataclass

import numpy as np

from . import oracles
from .config import parse_config, preset
from .diagnostics import (
    KineticGrid,
    complementarity_residual,
    kinetic_two_valued_metric,
    pressure_sup_bound_check,
    record_diagnostics,
)
from .elliptic import solve_chemo
from .errors import ConfigurationError
from .grid import build_grid, cell_divergence, face_gradient, norm
from .hyperbolic import step_hyperbolic
from .pme import step_pme
from .state import ModelParams, SimState, compute_pressure, make_state, stable_dt


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def _close(a, b, tol):
    return bool(np.all(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) <= tol))


def _grid_checks():
    g = build_grid(0, 1, 4)
    yield "grid spacing and centres", _close(g.h, 0.25, 0) and _close(g.centers, [0.125, 0.375, 0.625, 0.875], 1e-15)
    yield "grid (-1, 1, 8)", _close(build_grid(-1, 1, 8).centers[0], -0.875, 1e-15)
    g = build_grid(0, 1, 10)
    grad = face_gradient(g.centers, g)
    yield "gradient of identity", _close(grad[1:-1], 1.0, 1e-12) and grad[0] == grad[-1] == 0.0
    yield "gradient of constant", not np.any(face_gradient(np.full(10, 3.0), g))
    F = np.zeros(5)
    F[2] = 1.0
    div = cell_divergence(F, build_grid(0, 1, 4))
    yield "two-term divergence", _close(div, [0, 4, -4, 0], 1e-12)
    yield "L2 norm arithmetic", _close(norm([3.0, -4.0], build_grid(0, 1, 2), 2), math.sqrt(12.5), 1e-12)


def _elliptic_checks():
    g = build_grid(0, 1, 200)
    x = g.centers
    err = np.max(np.abs(solve_chemo(np.cos(np.pi * x), g) - np.cos(np.pi * x) / (1 + np.pi**2)))
    yield "chemo cosine error < 1e-3 at n=200", err < 1e-3, f"error {err:.3e}"
    g = build_grid(0, 1, 16)
    u = np.random.default_rng(0).random(16)
    diff = np.max(np.abs(solve_chemo(u, g) - oracles.dense_chemo(u, g.h)))
    yield "chemo vs dense solve", diff < 1e-12, f"difference {diff:.3e}"


def _solver_checks():
    yield "pressure law", _close(compute_pressure(np.array([1.0, 0.0]), 2), [2.0, 0.0], 0) and _close(
        compute_pressure(np.array([0.5]), 3), [0.375], 1e-15)
    g = build_grid(0, 1, 100)
    p = ModelParams(m=2, K=1, chi=1, cfl=0.5)
    c = 2.0 * g.centers
    s = SimState(0.0, np.zeros(100), c, np.zeros(100))
    yield "stable_dt formula", _close(stable_dt(s, p, g), 0.0025, 1e-15)

    g = build_grid(0, 1, 8)
    rng = np.random.default_rng(1)
    p = ModelParams(m=3.0, K=1.0, chi=5.0, D=1.0, newton_tol=1e-13)
    u = 0.2 + 0.6 * rng.random(8)
    s = make_state(0.0, u, p, g)
    dt = 0.5 * stable_dt(s, p, g)
    ref, _ = oracles.dense_pme_step(u, g.h, dt, p.m, p.K, p.chi, p.D)
    diff = np.max(np.abs(step_pme(s, p, g, dt).u - ref))
    yield "pme step vs dense Newton oracle (n=8)", diff < 1e-10, f"difference {diff:.3e}"
    ref = oracles.dense_hyperbolic_step(u, g.h, dt, p.K, p.chi)
    diff = np.max(np.abs(step_hyperbolic(s, p, g, dt).u - ref))
    yield "hyperbolic step vs flux loop (n=8)", diff < 1e-12, f"difference {diff:.3e}"
    for K in (1.0, 0.0):
        s = make_state(0.0, np.full(8, K), p, g)
        yield f"homogeneous state u={K} is fixed", _close(step_pme(s, p, g, 1e-3).u, K, 1e-14)


def _diagnostic_checks():
    g = build_grid(0, 1, 10)
    p = ModelParams(m=2, K=1)
    r = record_diagnostics(make_state(0, np.full(10, 0.5), p, g), p, g, 1.0)
    yield "constant-state record", r.u_min == r.u_max == 0.5 and r.excess_sat_l2_sq_increment == 0 and r.defect_increment == 0
    p2 = ModelParams(m=2, K=2)
    r = record_diagnostics(make_state(0, np.full(10, 1.5), p2, g), p2, g, 1.0)
    yield "excess saturation of u=1.5", _close(r.excess_sat_l2_sq_increment, 0.25, 1e-14)
    s = make_state(0, np.zeros(10), p, g)
    yield "vacuum complementarity", complementarity_residual(s, p, g)[1] == 0.0
    s = make_state(0, np.ones(10), p, g)
    yield "saturated complementarity", _close(complementarity_residual(s, p, g)[1], 0.0, 1e-12)
    kg = KineticGrid(np.linspace(0, 1, 11), window_cells=2)
    metric = kinetic_two_valued_metric(np.array([0.0, 1.0]), build_grid(0, 1, 2), kg)
    yield "two-cell kinetic window", _close(metric, 0.25, 1e-14)
    yield "pressure ceiling K=0.6", _close(pressure_sup_bound_check(ModelParams(m=2, K=0.6)), 1.2, 1e-14) and _close(
        pressure_sup_bound_check(ModelParams(m=20, K=0.6)), 20 / 19 * 0.6**19, 1e-18)


def _config_checks():
    cfg = parse_config("n_cells=100\nm=2\nK=1\nt_final=1")
    yield "config defaults", cfg.params.chi == 1 and cfg.params.D == 1 and (cfg.grid.x_min, cfg.grid.x_max) == (0, 1)
    try:
        parse_config("K=-1")
        yield "negative K rejected", False
    except ConfigurationError as exc:
        yield "negative K rejected", exc.key == "K"
    fig1 = preset("fig1")
    yield "fig1 preset", (fig1.params.K, fig1.params.chi, fig1.params.D) == (1, 40, 1) and fig1.snapshot_times == (0, 5, 20, 1000)
    yield "cosine initial mass", _close(np.sum(fig1.initial_density()) * fig1.grid.h, 0.5, 1e-14)


def selftest():
    """Run every check; returns a list of :class:`Check`."""
    results = []
    for group in (_grid_checks, _elliptic_checks, _solver_checks, _diagnostic_checks, _config_checks):
        try:
            for item in group():
                name, ok, *detail = item
                results.append(Check(name, bool(ok), detail[0] if detail else ""))
        except Exception as exc:  # a crashing group is a failed check, not a crashed selftest
            results.append(Check(group.__name__.strip("_"), False, f"{type(exc).__name__}: {exc}"))
    return results
