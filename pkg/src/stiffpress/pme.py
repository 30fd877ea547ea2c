"""Porous-medium Keller-Segel stepper.

One step advances ``u_t = D (u^m)_xx - chi (u (K - u) c_x)_x`` by

1. an explicit upwind update of the chemotactic flux with ``c`` frozen,
2. backward Euler for ``D (u^m)_xx``, solved by Newton on ``u`` with a
   tridiagonal Jacobian,
3. a fresh chemoattractant solve and the pressure law.
"""

import logging

import numpy as np
from scipy.linalg import lapack

from .errors import StepRejected
from .grid import cell_divergence
from .state import (  # noqa: F401  (re-exported solver API)
    ModelParams,
    SimState,
    compute_pressure,
    face_velocity,
    make_state,
    stable_dt,
)

log = logging.getLogger(__name__)


def advective_flux(u, c, p, g):
    """Upwind face flux of ``chi u (K - u) c_x``.

    The mobility ``u`` is taken from the upwind cell and the free volume
    ``K - u`` from the receiving cell.  This keeps the flux monotone
    (non-decreasing in ``u_L``, non-increasing in ``u_R``) so that ``0`` and
    ``K`` bound the update under the step restriction of :func:`stable_dt`.
    """
    v = face_velocity(c, p, g)[1:-1]
    uL, uR = u[:-1], u[1:]
    F = np.zeros(g.n_cells + 1)
    F[1:-1] = np.maximum(v, 0.0) * uL * (p.K - uR) - np.maximum(-v, 0.0) * uR * (p.K - uL)
    return F


def _monotone_margin(u, c, p, g, dt):
    # 1 - dt/h * (d/du_i of the outgoing minus incoming flux), cell by cell
    v = face_velocity(c, p, g)[1:-1]
    vp, vm = np.maximum(v, 0.0), np.maximum(-v, 0.0)
    uL, uR = u[:-1], u[1:]
    dF_dL = vp * (p.K - uR) + vm * uR
    dF_dR = vp * uL + vm * (p.K - uL)
    load = np.zeros(g.n_cells)
    load[:-1] += dF_dL
    load[1:] += dF_dR
    return 1.0 - dt / g.h * load


def _neumann_second_difference(phi):
    # h^2 * Laplacian_h(phi)
    out = np.empty_like(phi)
    d = np.diff(phi)
    out[0] = d[0]
    out[-1] = -d[-1]
    out[1:-1] = d[1:] - d[:-1]
    return out


def solve_implicit_diffusion(rhs, p, g, dt, guess=None):
    """Newton solve of ``w - dt D Laplacian_h(w^m) = rhs``.

    Returns ``(w, iterations, residual)``.  Iterates are clipped at zero.
    Raises :class:`StepRejected` if the residual does not drop below
    ``p.newton_tol`` within ``p.newton_max_iter`` iterations.
    """
    a = dt * p.D / g.h**2
    m = p.m
    n = g.n_cells
    neighbours = np.full(n, 2.0)
    neighbours[[0, -1]] = 1.0
    w = np.maximum(rhs if guess is None else guess, 0.0).astype(float)
    res = np.inf
    for it in range(p.newton_max_iter + 1):
        wm1 = w ** (m - 1.0)
        G = w - a * _neumann_second_difference(wm1 * w) - rhs
        res = float(np.max(np.abs(G)))
        if not np.isfinite(res):
            break
        if res <= p.newton_tol:
            return w, it, res
        if it == p.newton_max_iter:
            break
        dphi = m * wm1
        diag = 1.0 + a * neighbours * dphi
        upper = -a * dphi[1:]
        lower = -a * dphi[:-1]
        _, _, _, delta, info = lapack.dgtsv(lower, diag, upper, G)
        if info != 0:
            break
        w = np.maximum(w - delta, 0.0)
    raise StepRejected(f"Newton did not converge (residual {res:.3e}, dt={dt:.3e})")


def step_pme(s, p, g, dt):
    """Advance ``s`` by ``dt``; returns the new :class:`SimState`."""
    if dt <= 0:
        raise ValueError(f"non-positive time step {dt}")
    if _monotone_margin(s.u, s.c, p, g, dt).min() < -1e-12:
        raise StepRejected(f"dt={dt:.3e} violates the advective step restriction")
    rhs = s.u - dt * cell_divergence(advective_flux(s.u, s.c, p, g), g)
    w, _, _ = solve_implicit_diffusion(rhs, p, g, dt, guess=s.u)
    u = np.clip(w, 0.0, p.K)
    clipped = float(np.sum(np.abs(w - u)) * g.h)
    if clipped > 0:
        log.debug("t=%.6g: clipped mass %.3e", s.t + dt, clipped)
    return make_state(s.t + dt, u, p, g, clipped=clipped)


def run_pme(config, record=True):
    """Integrate the porous-medium system described by ``config``."""
    from .timeloop import march

    return march(config, step_pme, record=record)
