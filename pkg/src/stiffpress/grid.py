"""Uniform 1-D finite-volume mesh and Neumann-compatible difference operators.

Fields are plain ``numpy`` arrays: cell fields have length ``n_cells`` and
face fields length ``n_cells + 1``.  Face 0 and face ``n_cells`` are the
domain boundaries; every operator here leaves them at zero so that the
zero-flux condition holds structurally.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int

    @property
    def h(self):
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self):
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.h

    @property
    def faces(self):
        return self.x_min + np.arange(self.n_cells + 1) * self.h

    @property
    def length(self):
        return self.x_max - self.x_min


def build_grid(x_min, x_max, n_cells):
    """Return a uniform grid on ``[x_min, x_max]`` with ``n_cells`` cells."""
    x_min, x_max = float(x_min), float(x_max)
    if not (np.isfinite(x_min) and np.isfinite(x_max)) or not x_min < x_max:
        raise ConfigurationError(f"degenerate interval [{x_min}, {x_max}]", key="x_min")
    if int(n_cells) != n_cells or n_cells < 2:
        raise ConfigurationError(f"need an integer n_cells >= 2, got {n_cells}", key="n_cells")
    return Grid1D(x_min, x_max, int(n_cells))


def _check_cells(f, g):
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n_cells,):
        raise ValueError(f"cell field has shape {f.shape}, grid expects ({g.n_cells},)")
    return f


def _check_faces(F, g):
    F = np.asarray(F, dtype=float)
    if F.shape != (g.n_cells + 1,):
        raise ValueError(f"face field has shape {F.shape}, grid expects ({g.n_cells + 1},)")
    return F


def face_gradient(f, g):
    """Difference quotient ``(f[i] - f[i-1]) / h`` on interior faces, 0 on the boundary."""
    f = _check_cells(f, g)
    out = np.zeros(g.n_cells + 1)
    out[1:-1] = np.diff(f) / g.h
    return out


def cell_divergence(F, g):
    """Cell-wise ``(F[i+1] - F[i]) / h``."""
    F = _check_faces(F, g)
    return np.diff(F) / g.h


def laplacian(f, g):
    """Neumann Laplacian, ``cell_divergence(face_gradient(f))``."""
    return cell_divergence(face_gradient(f, g), g)


def face_average(f, g):
    """Arithmetic mean of the two cells adjacent to each face.

    Boundary faces take the value of their single neighbour.
    """
    f = _check_cells(f, g)
    out = np.empty(g.n_cells + 1)
    out[1:-1] = 0.5 * (f[1:] + f[:-1])
    out[0] = f[0]
    out[-1] = f[-1]
    return out


def cell_average_of_faces(F, g):
    """Mean of the two faces bounding each cell (used for cell-centred gradients)."""
    F = _check_faces(F, g)
    return 0.5 * (F[1:] + F[:-1])


def norm(f, g, p=2):
    """Discrete L^p norm ``(sum |f_i|^p h)^(1/p)``; ``p`` is 1, 2 or ``inf``.

    Works for face fields too, each face weighted by ``h``.
    """
    f = np.asarray(f, dtype=float)
    if p == 1:
        return float(np.sum(np.abs(f)) * g.h)
    if p == 2:
        return float(np.sqrt(np.sum(f * f) * g.h))
    if p in (np.inf, "inf"):
        return float(np.max(np.abs(f))) if f.size else 0.0
    raise ValueError(f"unsupported norm exponent {p!r}; use 1, 2 or inf")


def integral(f, g):
    """Midpoint-rule integral ``sum f_i h``."""
    return float(np.sum(f) * g.h)
