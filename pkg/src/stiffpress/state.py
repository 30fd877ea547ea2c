"""Model parameters, the (t, u, c, P) state, and quantities shared by both solvers."""

from dataclasses import dataclass, field, replace

import numpy as np

from .elliptic import solve_chemo
from .errors import ConfigurationError, InvariantViolation
from .grid import face_gradient


@dataclass(frozen=True)
class ModelParams:
    """Parameters of ``u_t = D (u^m)_xx - chi (u (K - u) c_x)_x`` plus solver knobs."""

    m: float = 2.0
    K: float = 1.0
    chi: float = 1.0
    D: float = 1.0
    cfl: float = 0.5
    dt_max_cap: float = 1e-2
    newton_tol: float = 1e-11
    newton_max_iter: int = 50
    max_halvings: int = 20

    def __post_init__(self):
        checks = [
            ("m", self.m > 1),
            ("K", self.K > 0),
            ("chi", self.chi >= 0),
            ("D", self.D > 0),
            ("cfl", 0 < self.cfl <= 1),
            ("dt_max_cap", self.dt_max_cap > 0),
            ("newton_tol", self.newton_tol > 0),
            ("newton_max_iter", self.newton_max_iter >= 1),
            ("max_halvings", self.max_halvings >= 0),
        ]
        for key, ok in checks:
            value = getattr(self, key)
            if not (ok and np.isfinite(value)):
                raise ConfigurationError(f"invalid value {value!r}", key=key)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass
class SimState:
    """Density, chemoattractant and pressure at time ``t``.

    ``clipped`` is the mass removed by the final ``[0, K]`` clip of the
    step that produced this state (zero for initial data).
    """

    t: float
    u: np.ndarray
    c: np.ndarray
    P: np.ndarray
    clipped: float = field(default=0.0, compare=False)


def compute_pressure(u, m):
    """Pressure law ``P = m / (m - 1) * u**(m - 1)``."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise InvariantViolation(f"negative density (min {u.min():.3e}) in pressure law")
    return (m / (m - 1.0)) * u ** (m - 1.0)


def make_state(t, u, p, g, clipped=0.0):
    """Build a consistent state from the density alone."""
    u = np.asarray(u, dtype=float)
    return SimState(float(t), u, solve_chemo(u, g), compute_pressure(u, p.m), clipped)


def face_velocity(c, p, g):
    """Chemotactic velocity ``chi * c_x`` on faces (zero on the boundary)."""
    return p.chi * face_gradient(c, g)


def stable_dt(s, p, g, floor=1e-12):
    """Largest admissible explicit-advection step for state ``s``.

    The characteristic speed of ``u (K - u)`` at a face is
    ``|v| max(|K - 2 u_L|, |K - 2 u_R|)``.  Both advective fluxes used here
    are monotone only if ``dt |v| K <= h / 2`` as well, which bounds the
    speed from below by ``|v| K``; for densities in ``[0, K]`` this second
    bound always dominates.
    """
    v = np.abs(face_velocity(s.c, p, g)[1:-1])
    uL, uR = s.u[:-1], s.u[1:]
    char = np.maximum(np.abs(p.K - 2 * uL), np.abs(p.K - 2 * uR))
    speed = v * np.maximum(np.maximum(char, floor), p.K)
    top = float(speed.max()) if speed.size else 0.0
    if top <= 0.0:
        return p.dt_max_cap
    return min(p.dt_max_cap, p.cfl * g.h / top)


def check_state(s, p, atol=1e-12):
    """Raise :class:`InvariantViolation` if ``s`` leaves ``[0, K]`` or is not finite."""
    for name in ("u", "c", "P"):
        if not np.all(np.isfinite(getattr(s, name))):
            raise InvariantViolation(f"non-finite {name} at t={s.t}")
    if s.u.min() < -atol or s.u.max() > p.K + atol:
        raise InvariantViolation(
            f"density outside [0, K] at t={s.t}: [{s.u.min():.6g}, {s.u.max():.6g}]"
        )
