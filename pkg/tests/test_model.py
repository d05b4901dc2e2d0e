import math
from fractions import Fraction

import numpy as np
import pytest

from edgespec.errors import ConfigurationError, WittViolationError
from edgespec.grids import build_grid, fd_assemble_model
from edgespec.model import (FiberSpectrum, ModelBlock, a_identity,
                            block_apply, block_matrix, check_witt,
                            homogeneous_solutions, interior_slice,
                            solve_scalar, verify_square_identity)


def test_witt_pass_and_fail():
    assert check_witt(FiberSpectrum((1.6, -1.6))).passes
    assert not check_witt(FiberSpectrum((1.0, -1.0))).passes  # boundary fails
    assert not check_witt(FiberSpectrum((0.9, -0.9, 2.0))).passes
    rep = check_witt(FiberSpectrum((1.6, -1.6)))
    assert rep.min_abs == 1.6
    assert rep.implied_nu_floor == pytest.approx(2.1)
    assert rep.delta == pytest.approx(0.6)


def test_witt_exact_fraction_arithmetic():
    spec = FiberSpectrum((Fraction(8, 5), Fraction(-8, 5)))
    rep = check_witt(spec)
    assert rep.implied_nu_floor == Fraction(21, 10)
    assert rep.delta == Fraction(3, 5)


def test_a_identity_exact():
    for s in (Fraction(8, 5), Fraction(-3, 2), Fraction(0), Fraction(7, 3)):
        lhs, rhs = a_identity(s)
        assert lhs == rhs  # exact rational equality
    lhs, rhs = a_identity(-2.25)
    assert lhs == pytest.approx(rhs, rel=1e-15)


def test_fiber_spectrum_nu_values():
    spec = FiberSpectrum((1.6, -1.6, 2.5, -4.0))
    assert spec.nu_values() == (2.1, 3.0, 4.5)
    with pytest.raises(ConfigurationError):
        FiberSpectrum(())
    with pytest.raises(ConfigurationError):
        FiberSpectrum((1.0, math.inf))


def test_model_block_validation():
    with pytest.raises(WittViolationError):
        ModelBlock("scalar_L2", 1.4)
    with pytest.raises(ConfigurationError):
        ModelBlock("cube", 2.0)
    with pytest.raises(ConfigurationError):
        ModelBlock("scalar_L2", 2.0, -1.0)
    assert ModelBlock("scalar_L2", 2.0).kernel().kind == "free"
    assert ModelBlock("scalar_L2", 2.0, 1.0).kernel().kind == "bessel"


@pytest.mark.parametrize("nu,beta", [(1.6, 0.0), (2.1, 1.0), (5.0, 1.0)])
def test_solve_scalar_round_trip(nu, beta):
    grid = build_grid(400, 1e-2, 1e2)
    g = np.exp(-np.log(grid.nodes) ** 2)
    f = solve_scalar(ModelBlock("scalar_L2", nu, beta), g, grid)
    resid = fd_assemble_model(nu, beta, grid).apply(f) - g
    sl = interior_slice(grid.n)
    w = grid.weights[sl]
    rel = math.sqrt(float(w @ resid[sl] ** 2) / float(w @ g[sl] ** 2))
    assert rel <= 2e-3


def test_block_square_matches_scalar_squares():
    grid = build_grid(400, 1e-1, 10.0)
    t = np.log(grid.nodes)
    u = np.vstack([np.exp(-t ** 2), np.exp(-(t - 0.5) ** 2)])
    rep = verify_square_identity(2.1, 1.0, u, grid)
    assert rep["relative"] <= 5e-2  # first-order composition vs direct
    # and the discrepancy shrinks under refinement
    fine = build_grid(800, 1e-1, 10.0)
    tf = np.log(fine.nodes)
    uf = np.vstack([np.exp(-tf ** 2), np.exp(-(tf - 0.5) ** 2)])
    rep2 = verify_square_identity(2.1, 1.0, uf, fine)
    assert rep2["relative"] <= 0.6 * rep["relative"]


def test_block_apply_shape_checks():
    grid = build_grid(64, 1e-1, 10.0)
    block = ModelBlock("block_L", 2.0, 1.0)
    with pytest.raises(ConfigurationError):
        block_apply(block, np.ones(grid.n), grid)
    with pytest.raises(ConfigurationError):
        block_apply(block, np.full((2, grid.n), np.nan), grid)
    m = block_matrix(block, grid)
    assert m.shape == (2 * grid.n, 2 * grid.n)
    with pytest.raises(ConfigurationError):
        block_matrix(ModelBlock("scalar_L2", 2.0), grid)


def test_homogeneous_solutions_annihilated():
    # both families solve the ODE; the FD residual is pure truncation error
    # and shrinks at second order under grid refinement
    for beta in (0.0, 1.0):
        resids = {}
        for n in (600, 1200):
            grid = build_grid(n, 1e-1, 10.0)
            sl = interior_slice(grid.n)
            op = fd_assemble_model(2.5, beta, grid)
            worst = 0.0
            for sol in homogeneous_solutions(2.5, beta, grid):
                scale = np.max(np.abs(sol[sl] / grid.nodes[sl] ** 2))
                worst = max(worst,
                            np.max(np.abs(op.apply(sol)[sl])) / scale)
            resids[n] = worst
        assert resids[600] <= 5e-2
        assert resids[1200] <= 0.3 * resids[600]


def test_homogeneous_solutions_not_square_integrable():
    # truncated L2 norms diverge as the window widens
    grow_norms, decay_norms = [], []
    for span in (1e2, 1e4):
        grid = build_grid(400, 1.0 / span, span)
        grow, decay = homogeneous_solutions(2.0, 0.0, grid)
        grow_norms.append(float(grid.weights @ grow ** 2))
        decay_norms.append(float(grid.weights @ decay ** 2))
    # x^{nu+1/2} blows up at infinity, x^{-nu+1/2} at zero
    assert grow_norms[1] > 1e3 * grow_norms[0]
    assert decay_norms[1] > 1e3 * decay_norms[0]
