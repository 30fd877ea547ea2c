"""Slow reference implementations used to cross-check the production solvers.

Everything here is written with explicit loops and dense matrices and
shares no code with the banded solvers beyond the grid geometry.
"""

import numpy as np


def dense_neumann_laplacian(n, h):
    L = np.zeros((n, n))
    for i in range(n):
        if i > 0:
            L[i, i - 1] += 1.0
            L[i, i] -= 1.0
        if i < n - 1:
            L[i, i + 1] += 1.0
            L[i, i] -= 1.0
    return L / h**2


def dense_chemo(u, h):
    n = len(u)
    A = np.eye(n) - dense_neumann_laplacian(n, h)
    return np.linalg.solve(A, np.asarray(u, dtype=float))


def face_differences(f, h):
    n = len(f)
    out = np.zeros(n + 1)
    for i in range(1, n):
        out[i] = (f[i] - f[i - 1]) / h
    return out


def upwind_flux_loop(u, c, K, chi, h):
    n = len(u)
    F = np.zeros(n + 1)
    for i in range(1, n):
        v = chi * (c[i] - c[i - 1]) / h
        if v > 0:
            F[i] = v * u[i - 1] * (K - u[i])
        elif v < 0:
            F[i] = v * u[i] * (K - u[i - 1])
    return F


def llf_flux_loop(u, c, K, chi, h):
    n = len(u)
    F = np.zeros(n + 1)
    for i in range(1, n):
        v = chi * (c[i] - c[i - 1]) / h
        uL, uR = u[i - 1], u[i]
        alpha = abs(v) * max(abs(K - 2 * uL), abs(K - 2 * uR))
        F[i] = 0.5 * (v * (uL * (K - uL) + uR * (K - uR)) - alpha * (uR - uL))
    return F


def dense_pme_step(u, h, dt, m, K, chi, D, tol=1e-14, max_iter=100):
    """One split step with a dense Newton solve; returns ``(u_new, c_new)``."""
    u = np.asarray(u, dtype=float)
    n = len(u)
    c = dense_chemo(u, h)
    F = upwind_flux_loop(u, c, K, chi, h)
    rhs = np.array([u[i] - dt * (F[i + 1] - F[i]) / h for i in range(n)])
    L = dense_neumann_laplacian(n, h)
    w = np.maximum(u.copy(), 0.0)
    for _ in range(max_iter):
        G = w - dt * D * L @ (w**m) - rhs
        if np.max(np.abs(G)) <= tol:
            break
        J = np.eye(n) - dt * D * L @ np.diag(m * w ** (m - 1))
        w = np.maximum(w - np.linalg.solve(J, G), 0.0)
    w = np.clip(w, 0.0, K)
    return w, dense_chemo(w, h)


def dense_hyperbolic_step(u, h, dt, K, chi):
    u = np.asarray(u, dtype=float)
    c = dense_chemo(u, h)
    F = llf_flux_loop(u, c, K, chi, h)
    new = np.array([u[i] - dt * (F[i + 1] - F[i]) / h for i in range(len(u))])
    return np.clip(new, 0.0, K)


def diagnostics_loop(u, c, h, dt, m, K, chi, D):
    """Straightforward recomputation of the per-step diagnostics."""
    n = len(u)
    P = [m / (m - 1) * ui ** (m - 1) for ui in u]
    lapP = []
    for i in range(n):
        left = (P[i] - P[i - 1]) / h if i > 0 else 0.0
        right = (P[i + 1] - P[i]) / h if i < n - 1 else 0.0
        lapP.append((right - left) / h)
    comp = sum(abs(P[i] * (lapP[i] + chi / D * (K - 1) * (1 - c[i]))) for i in range(n)) * h
    excess = sum(max(ui - 1, 0.0) ** 2 for ui in u) * h * dt
    gradP = sum(((P[i] - P[i - 1]) / h) ** 2 for i in range(1, n)) * h * dt
    defect = sum(
        (u[i] - u[i - 1]) / h * (u[i] ** m - u[i - 1] ** m) / h for i in range(1, n)
    ) * h * dt
    satP = sum(abs(P[i] * (1 - u[i])) for i in range(n)) * h
    satG = sum(
        abs((P[i] - P[i - 1]) / h * (1 - 0.5 * (u[i] + u[i - 1]))) for i in range(1, n)
    ) * h
    return {
        "mass": sum(u) * h,
        "u_min": min(u),
        "u_max": max(u),
        "comp_residual_l1": comp,
        "excess_sat_l2_sq_increment": excess,
        "grad_P_energy_increment": gradP,
        "defect_increment": defect,
        "sat_product_P": satP,
        "sat_product_gradP": satG,
        "P_max": max(P),
    }
