import math

import numpy as np
import pytest

from edgespec.errors import (ConfigurationError, NumericalError,
                             WittViolationError)
from edgespec.grids import (DiscreteOperator, HalfLineGrid, SobolevSpec,
                            build_grid, fd_assemble_model,
                            metric_adjoint_matrix, nystrom_assemble,
                            operator_norm, sobolev_norm)
from edgespec.kernels import ConeKernel, WeightedAction


def test_trapezoid_weights_telescope():
    g = build_grid(200, 1e-3, 1e2)
    assert float(np.sum(g.weights)) == pytest.approx(1e2 - 1e-3, rel=1e-14)
    assert g.nodes[0] == 1e-3 and g.nodes[-1] == 1e2
    assert g.n == 200


def test_gauss_panels_integrate_powers():
    g = build_grid(256, 0.1, 10.0, scheme="log_gauss_panels")
    for p in (0.0, 1.0, 2.5, -1.3):
        exact = ((10.0 ** (p + 1) - 0.1 ** (p + 1)) / (p + 1)
                 if p != -1.0 else math.log(100.0))
        assert float(g.weights @ g.nodes ** p) == pytest.approx(
            exact, rel=1e-12)


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        build_grid(8)
    with pytest.raises(ConfigurationError):
        build_grid(100, 1.0, 0.5)
    with pytest.raises(ConfigurationError):
        build_grid(100, scheme="chebyshev")
    g = build_grid(64, 0.1, 10.0, scheme="log_gauss_panels")
    with pytest.raises(ConfigurationError):
        g.log_step  # only defined for log_trapezoid


def test_metric_adjoint_is_adjoint():
    rng = np.random.default_rng(7)
    g = build_grid(40, 0.1, 10.0)
    m = rng.normal(size=(g.n, g.n))
    ma = metric_adjoint_matrix(m, g.weights)
    u, v = rng.normal(size=g.n), rng.normal(size=g.n)
    lhs = float(g.weights @ ((m @ u) * v))
    rhs = float(g.weights @ (u * (ma @ v)))
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_operator_norm_diagonal_exact():
    g = build_grid(50, 0.1, 10.0)
    d = np.linspace(0.2, 3.7, g.n)
    op = DiscreteOperator(np.diag(d), g, g.weights)
    assert operator_norm(op) == pytest.approx(3.7, rel=1e-7)
    zero = DiscreteOperator(np.zeros((g.n, g.n)), g, g.weights)
    assert operator_norm(zero) == 0.0
    with pytest.raises(ConfigurationError):
        operator_norm(op, tol=0.0)
    with pytest.raises(NumericalError):
        operator_norm(op, tol=1e-16, max_iter=2)


def test_nystrom_free_norm_matches_mellin_value():
    # the weighted free-kernel operator x^-2 K has exact norm (nu^2 - 1)^-1
    # on the full half-line (Mellin transform diagonalizes it)
    # truncation approaches the norm from below (the extremal profile
    # x^{-1/2} is only marginally square integrable)
    nu = 3.0
    g = build_grid(400, 1e-5, 1e5)
    op = nystrom_assemble(ConeKernel("free", nu), WeightedAction(-2, 0), g,
                          refine_diagonal=True)
    exact = 1.0 / (nu * nu - 1.0)
    measured = operator_norm(op)
    assert measured <= exact * (1.0 + 1e-6)
    assert measured == pytest.approx(exact, rel=1e-2)


def test_fd_model_manufactured_solution_order():
    # L u = g for u = x^{5/2} exp(-x); residual of the FD operator against
    # the analytic g decays at second order in the log spacing
    nu, beta = 2.0, 0.0
    errs = {}
    for n in (200, 400):
        g = build_grid(n, 1e-1, 10.0)
        x = g.nodes
        u = x ** 2.5 * np.exp(-x)
        # -u'' + (nu^2 - 1/4)/x^2 u with u = x^{5/2} e^{-x}
        rhs = (-(2.5 * 1.5 * x ** 0.5 - 2 * 2.5 * x ** 1.5 + x ** 2.5)
               * np.exp(-x) + (nu * nu - 0.25) * x ** 0.5 * np.exp(-x))
        op = fd_assemble_model(nu, beta, g)
        resid = op.apply(u) - rhs
        sl = slice(n // 10, -n // 10)
        errs[n] = float(np.max(np.abs(resid[sl])) / np.max(np.abs(rhs[sl])))
    order = math.log2(errs[200] / errs[400])
    assert errs[400] <= 1e-3
    assert order >= 1.8


def test_fd_model_validation():
    g = build_grid(400)
    with pytest.raises(WittViolationError):
        fd_assemble_model(1.2, 0.0, g)
    coarse = build_grid(16, 1e-4, 1e3)
    with pytest.raises(ConfigurationError):
        fd_assemble_model(2.0, 0.0, coarse)


def test_sobolev_norm_constant_profile():
    # u = x^delta gives v = 1: derivatives vanish exactly (the one-sided
    # boundary rows are exact on constants) and the norm collapses to
    # sqrt((1 + sum nu_j^2s) * (x_max - x_min))
    g = build_grid(100, 0.5, 2.0)
    length = 2.0 - 0.5
    u = np.vstack([g.nodes ** 0.3, g.nodes ** 0.3])
    for s in (0, 1, 2):
        spec = SobolevSpec(s, delta=0.3, fiber_weights=(2.0, 3.0))
        got = sobolev_norm(u, spec, g)
        if s == 0:
            want = math.sqrt(2.0 * length)
        else:
            want = math.sqrt((2.0 + 2.0 ** (2 * s) + 3.0 ** (2 * s)) * length)
        assert got == pytest.approx(want, rel=1e-12)


def test_sobolev_validation():
    g = build_grid(50, 0.5, 2.0)
    with pytest.raises(ConfigurationError):
        SobolevSpec(3)
    with pytest.raises(ConfigurationError):
        SobolevSpec(1, fiber_weights=())
    spec = SobolevSpec(1, fiber_weights=(2.0,))
    with pytest.raises(ConfigurationError):
        sobolev_norm(np.ones((2, g.n)), spec, g)
    with pytest.raises(ConfigurationError):
        sobolev_norm(np.ones(g.n - 1), spec, g)
    bad = np.ones(g.n)
    bad[3] = np.inf
    with pytest.raises(ConfigurationError):
        sobolev_norm(bad, spec, g)


def test_sobolev_norm_monotone_in_order():
    g = build_grid(80, 0.2, 5.0)
    u = np.sin(np.log(g.nodes))
    norms = [sobolev_norm(u, SobolevSpec(s, fiber_weights=(1.7,)), g)
             for s in (0, 1, 2)]
    assert norms[0] < norms[1] < norms[2]
