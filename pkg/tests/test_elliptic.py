import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from stiffpress import InvariantViolation, build_grid, solve_chemo
from stiffpress.elliptic import assemble_helmholtz, helmholtz_residual
from stiffpress.oracles import dense_chemo


def cosine_error(n):
    g = build_grid(0, 1, n)
    x = g.centers
    return np.max(np.abs(solve_chemo(np.cos(np.pi * x), g) - np.cos(np.pi * x) / (1 + np.pi**2)))


def test_constant_density():
    g = build_grid(0, 1, 20)
    assert np.allclose(solve_chemo(np.ones(20), g), 1.0, atol=1e-13)


def test_cosine_accuracy_and_order():
    assert cosine_error(200) < 1e-3
    for n in (50, 100, 200):
        assert cosine_error(n) / cosine_error(2 * n) == pytest.approx(4.0, rel=0.2)


def test_matches_dense_solve(rng):
    g = build_grid(0, 1, 16)
    u = rng.random(16)
    assert np.allclose(solve_chemo(u, g), dense_chemo(u, g.h), rtol=0, atol=1e-12)


@pytest.mark.parametrize("n", [8, 32, 64])
def test_residual_bound(rng, n):
    g = build_grid(0, 1, n)
    u = rng.random(n) * 3
    c = solve_chemo(u, g)
    assert np.max(np.abs(helmholtz_residual(c, u, g))) <= 1e-12 * (1 + np.abs(u).max())


@pytest.mark.parametrize("n", [200, 400])
def test_residual_at_roundoff_on_fine_grids(rng, n):
    # rounding c alone leaves a residual of order eps*|c|/h**2
    g = build_grid(0, 1, n)
    u = rng.random(n) * 3
    c = solve_chemo(u, g)
    floor = 16 * np.finfo(float).eps * (1 + np.abs(u).max()) / g.h**2
    assert np.max(np.abs(helmholtz_residual(c, u, g))) <= floor


def test_mass_identity(rng, unit_grid):
    u = rng.random(unit_grid.n_cells) * 3
    c = solve_chemo(u, unit_grid)
    assert abs(c.sum() - u.sum()) <= 1e-12 * u.sum()


def test_system_is_diagonally_dominant():
    s = assemble_helmholtz(np.zeros(10), build_grid(0, 1, 10))
    off = np.abs(s.off)
    row_off = np.zeros(10)
    row_off[:-1] += off
    row_off[1:] += off
    assert np.all(s.diag >= 1.0 + row_off - 1e-9)


def test_rejects_non_finite():
    with pytest.raises(InvariantViolation):
        solve_chemo(np.array([0.0, np.nan, 1.0]), build_grid(0, 1, 3))


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.integers(2, 80), elements=st.floats(0, 5)))
def test_maximum_principle(u):
    g = build_grid(0, 1, u.size)
    c = solve_chemo(u, g)
    tol = 1e-12 * (1 + u.max())
    assert c.min() >= u.min() - tol
    assert c.max() <= u.max() + tol


def test_solve_is_fast():
    g = build_grid(0, 1, 200)
    u = np.random.default_rng(0).random(200)
    start = time.perf_counter()
    for _ in range(100):
        solve_chemo(u, g)
    assert time.perf_counter() - start < 1.0
