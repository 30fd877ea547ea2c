"""Chemoattractant solve ``-c'' + c = u`` with homogeneous Neumann conditions."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lapack

from .errors import InvariantViolation, StiffPressError


@dataclass(frozen=True)
class HelmholtzSystem:
    """Symmetric tridiagonal system ``(I - Laplacian_h) c = rhs``.

    ``off`` holds the (identical) sub- and super-diagonal, one entry per
    interior face.  Boundary rows see a single neighbour, which is what
    makes ``sum(c) == sum(rhs)`` hold exactly.
    """

    diag: np.ndarray
    off: np.ndarray
    rhs: np.ndarray

    def matvec(self, c):
        out = self.diag * c
        out[:-1] += self.off * c[1:]
        out[1:] += self.off * c[:-1]
        return out


def assemble_helmholtz(u, g):
    n, inv_h2 = g.n_cells, 1.0 / g.h**2
    neighbours = np.full(n, 2.0)
    neighbours[[0, -1]] = 1.0
    return HelmholtzSystem(
        diag=1.0 + neighbours * inv_h2,
        off=np.full(n - 1, -inv_h2),
        rhs=np.asarray(u, dtype=float).copy(),
    )


@lru_cache(maxsize=32)
def _factor(g):
    # L D L^T factorization; the matrix only depends on the grid.
    system = assemble_helmholtz(np.zeros(g.n_cells), g)
    d, e, info = lapack.dpttrf(system.diag, system.off)
    if info != 0:
        raise StiffPressError(f"dpttrf failed with info={info}")
    return d, e


def solve_chemo(u, g):
    """Return ``c`` solving ``-Laplacian_h c + c = u`` on ``g``.

    The discrete operator is an M-matrix, so ``min(u) <= c <= max(u)``
    and the integrals of ``c`` and ``u`` agree.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (g.n_cells,):
        raise ValueError(f"density has shape {u.shape}, grid expects ({g.n_cells},)")
    if not np.all(np.isfinite(u)):
        raise InvariantViolation("non-finite density passed to the chemoattractant solve")
    d, e = _factor(g)
    c = _dpttrs(d, e, u)
    # one refinement sweep; the residual is dominated by roundoff in the 1/h^2 terms
    c += _dpttrs(d, e, u - assemble_helmholtz(u, g).matvec(c))
    return c


def _dpttrs(d, e, b):
    x, info = lapack.dpttrs(d, e, b)
    if info != 0:
        raise StiffPressError(f"dpttrs failed with info={info}")
    return np.asarray(x).reshape(-1)


def helmholtz_residual(c, u, g):
    """``-Laplacian_h c + c - u`` cell by cell."""
    return assemble_helmholtz(u, g).matvec(np.asarray(c, dtype=float)) - u
