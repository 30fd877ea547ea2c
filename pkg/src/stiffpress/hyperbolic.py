"""Monotone finite-volume solver for ``u_t + chi (u (K - u) c_x)_x = 0``, ``-c'' + c = u``.

This is the ``m -> infinity`` limit for ``K <= 1``.  The face flux is local
Lax-Friedrichs with the velocity ``v = chi c_x`` frozen over the step.
"""

import numpy as np

from .errors import StepRejected
from .grid import cell_divergence
from .state import SimState, face_velocity, make_state


def llf_flux(u, c, p, g):
    v = face_velocity(c, p, g)[1:-1]
    uL, uR = u[:-1], u[1:]
    fL, fR = uL * (p.K - uL), uR * (p.K - uR)
    alpha = np.abs(v) * np.maximum(np.abs(p.K - 2 * uL), np.abs(p.K - 2 * uR))
    F = np.zeros(g.n_cells + 1)
    F[1:-1] = 0.5 * (v * (fL + fR) - alpha * (uR - uL))
    return F, alpha


def step_hyperbolic(s, p, g, dt):
    """Conservative LLF update.

    ``P`` is reported as the pressure law of the new density for ``K > 1``
    and as zero for ``K <= 1``, where the limit pressure gradient vanishes.
    """
    if dt <= 0:
        raise ValueError(f"non-positive time step {dt}")
    F, alpha = llf_flux(s.u, s.c, p, g)
    load = np.zeros(g.n_cells)
    load[:-1] += alpha
    load[1:] += alpha
    if dt / g.h * load.max(initial=0.0) > 1.0 + 1e-12:
        raise StepRejected(f"dt={dt:.3e} violates the LLF CFL condition")
    u = s.u - dt * cell_divergence(F, g)
    new = make_state(s.t + dt, np.clip(u, 0.0, p.K), p, g)
    new.clipped = float(np.sum(np.abs(u - new.u)) * g.h)
    if p.K <= 1.0:
        new.P = np.zeros_like(new.u)
    return new


def limit_state(s, p):
    """Copy of ``s`` with the limit-run pressure convention applied."""
    if p.K <= 1.0:
        return SimState(s.t, s.u, s.c, np.zeros_like(s.u), s.clipped)
    return s


def run_hyperbolic(config, record=True):
    """Integrate the hyperbolic limit system described by ``config``."""
    from .timeloop import march

    return march(config, step_hyperbolic, record=record, initial_map=limit_state)
