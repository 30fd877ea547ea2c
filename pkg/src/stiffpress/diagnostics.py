"""Measured quantities that track the incompressible limit.

For general ``chi`` and ``D`` the limit pressure satisfies
``D P'' + chi (K - 1)(1 - c) = 0`` on its support, so the saturation drive
below carries the factor ``chi / D``; it reduces to ``(K - 1)(1 - c)``
when ``chi = D = 1``.
"""

from dataclasses import dataclass, fields

import numpy as np
from scipy import ndimage

from .grid import face_average, face_gradient, integral, laplacian, norm


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    u_min: float
    u_max: float
    comp_residual_l1: float
    excess_sat_l2_sq_increment: float
    grad_P_energy_increment: float
    defect_increment: float
    sat_product_P: float
    sat_product_gradP: float
    P_max: float

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def as_tuple(self):
        return tuple(getattr(self, name) for name in self.field_names())


def saturation_drive(c, p):
    """``(chi / D) (K - 1)(1 - c)``."""
    return (p.chi / p.D) * (p.K - 1.0) * (1.0 - np.asarray(c))


def complementarity_residual(s, p, g):
    """Cellwise ``P (Laplacian_h P + drive)`` and its L1 norm."""
    r = s.P * (laplacian(s.P, g) + saturation_drive(s.c, p))
    return r, norm(r, g, 1)


def record_diagnostics(s, p, g, dt):
    """Per-step record; increments integrate over ``[s.t, s.t + dt]`` with the left endpoint."""
    h = g.h
    u, P = s.u, s.P
    gradP = face_gradient(P, g)
    gradu = face_gradient(u, g)
    gradum = face_gradient(u**p.m, g)
    excess = np.maximum(u - 1.0, 0.0)
    _, comp = complementarity_residual(s, p, g)
    return DiagnosticsRecord(
        t=s.t,
        mass=integral(u, g),
        u_min=float(u.min()),
        u_max=float(u.max()),
        comp_residual_l1=comp,
        excess_sat_l2_sq_increment=h * dt * float(np.sum(excess * excess)),
        grad_P_energy_increment=dt * h * float(np.sum(gradP * gradP)),
        defect_increment=dt * h * float(np.sum(gradu * gradum)),
        sat_product_P=norm(P * (1.0 - u), g, 1),
        sat_product_gradP=norm(gradP * (1.0 - face_average(u, g)), g, 1),
        P_max=float(P.max()),
    )


@dataclass(frozen=True)
class KineticGrid:
    """Velocity nodes for ``f(x, xi) = 1[xi < u(x)]`` and the coarse-graining width.

    ``window_cells`` consecutive cells are averaged into one block.
    """

    xi_nodes: np.ndarray
    window_cells: int = 5

    @classmethod
    def for_capacity(cls, K, n_nodes=64, margin=0.05, window_cells=5):
        return cls(np.linspace(0.0, K * (1.0 + margin), n_nodes), window_cells)


def kinetic_indicator(u, xi_nodes):
    """Matrix ``f[i, j] = 1 if xi_j < u_i else 0``."""
    return (np.asarray(xi_nodes)[None, :] < np.asarray(u)[:, None]).astype(float)


def block_average(f, window_cells):
    """Average rows of ``f`` over consecutive blocks; returns (averages, block sizes)."""
    n = f.shape[0]
    starts = np.arange(0, n, window_cells)
    sums = np.add.reduceat(f, starts, axis=0)
    sizes = np.diff(np.append(starts, n))
    return sums / sizes[:, None], sizes


def kinetic_two_valued_metric(u, g, kg):
    """``int int fbar (1 - fbar) dx dxi`` for the block-averaged kinetic indicator.

    The xi integral is a left Riemann sum over the node intervals.
    """
    if kg.window_cells < 1:
        raise ValueError("window_cells must be >= 1")
    fbar, sizes = block_average(kinetic_indicator(u, kg.xi_nodes), kg.window_cells)
    dxi = np.diff(kg.xi_nodes)
    integrand = (fbar * (1.0 - fbar))[:, :-1]
    return float(np.sum(integrand * dxi[None, :] * (sizes * g.h)[:, None]))


@dataclass
class MuProfile:
    """Discrete decomposition measure and the sets it is compared against.

    ``mu`` is zero outside ``support``.  ``interior`` marks cells whose
    surrounding window is saturated (mean of ``1 - u`` below the threshold).
    ``degenerate`` is set for ``K <= 1``, where the profile carries no
    free-boundary information.
    """

    mu: np.ndarray
    support: np.ndarray
    interior: np.ndarray
    eps_threshold: float
    degenerate: bool


def window_mean(f, window_cells):
    """Centred moving average over ``window_cells`` cells, truncated at the domain ends."""
    f = np.asarray(f, dtype=float)
    r = window_cells // 2
    csum = np.concatenate([[0.0], np.cumsum(f)])
    idx = np.arange(f.size)
    lo = np.maximum(idx - r, 0)
    hi = np.minimum(idx + r + 1, f.size)
    return (csum[hi] - csum[lo]) / (hi - lo)


def mu_profile(s, p, g, eps_threshold=None, window_cells=5):
    """``Laplacian_h P + drive`` restricted to ``{P > eps}``."""
    if eps_threshold is None:
        eps_threshold = 1e-6 * float(s.P.max(initial=0.0))
    support = s.P > eps_threshold
    raw = laplacian(s.P, g) + saturation_drive(s.c, p)
    mu = np.where(support, raw, 0.0)
    interior = window_mean(1.0 - s.u, window_cells) < eps_threshold
    return MuProfile(mu, support, interior, float(eps_threshold), degenerate=p.K <= 1.0)


def erode(mask, cells):
    """Drop cells within ``cells`` of the mask boundary; domain ends do not erode."""
    if cells <= 0 or not mask.any():
        return mask.copy()
    return ndimage.binary_erosion(mask, iterations=cells, border_value=1)


def distance_to_edge(mask):
    """Cell distance from each cell to the nearest change of ``mask``."""
    edges = np.flatnonzero(np.diff(mask.astype(int)))
    if edges.size == 0:
        return np.full(mask.size, np.inf)
    idx = np.arange(mask.size)
    # an edge between cells e and e+1 is at distance 0 from both
    d_left = np.abs(idx[:, None] - edges[None, :])
    d_right = np.abs(idx[:, None] - (edges[None, :] + 1))
    return np.minimum(d_left, d_right).min(axis=1)


def pressure_sup_bound_check(p):
    """``(m / (m - 1)) K^(m - 1)``: the pressure ceiling when ``K < 1``."""
    if p.K >= 1.0:
        raise ValueError(f"the pressure ceiling only tends to zero for K < 1 (K={p.K})")
    return (p.m / (p.m - 1.0)) * p.K ** (p.m - 1.0)
