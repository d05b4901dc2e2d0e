"""Model Bessel operators, their explicit inverses and the Witt checker.

The fiber operator S is modeled by its (finite, truncated) eigenvalue list.
Each eigenvalue s contributes nu = |s| + 1/2, and the squared model operator
reduces over the corresponding fiber to the scalar Bessel operator

    -d^2/dx^2 + x^{-2}(nu^2 - 1/4) + beta^2,    beta = |xi|,

inverted by the cone kernels of :mod:`edgespec.kernels`.  The first-order
model reduces to the 2x2 block

    [[beta, -(d/dx - mu/x)], [d/dx + mu/x, -beta]],   mu = nu - 1/2,

whose square is diag(-d^2/dx^2 + mu(mu+1)/x^2 + beta^2,
                     -d^2/dx^2 + mu(mu-1)/x^2 + beta^2).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError, WittViolationError
from .grids import (HalfLineGrid, build_grid, fd_assemble_model,
                    nystrom_assemble, operator_norm, _t_derivative_matrices)
from .kernels import ConeKernel, WeightedAction, weighted_kernel_matrix

DEFAULT_GAP = 1.0
N_FIBER_DEFAULT = 16


@dataclass(frozen=True)
class FiberSpectrum:
    """Truncated spectrum of the fiber operator S plus the Witt gap."""

    eigenvalues: tuple
    gap: float = DEFAULT_GAP

    def __post_init__(self):
        if len(self.eigenvalues) == 0:
            raise ConfigurationError("fiber spectrum must be nonempty")
        if not all(math.isfinite(float(s)) for s in self.eigenvalues):
            raise ConfigurationError("fiber eigenvalues must be finite")

    def nu_values(self):
        """Distinct Bessel orders nu = |s| + 1/2, sorted."""
        return tuple(sorted({abs(float(s)) + 0.5 for s in self.eigenvalues}))


@dataclass(frozen=True)
class WittReport:
    passes: bool
    min_abs: float
    implied_nu_floor: float
    delta: float


def _half_like(s):
    return Fraction(1, 2) if isinstance(s, Fraction) else 0.5


def check_witt(spectrum: FiberSpectrum) -> WittReport:
    """Spectral Witt condition: spec(S) stays outside [-gap, gap].

    The closed interval is excluded, so |s| = gap fails.  The implied order
    floor is min|s| + 1/2 and delta is the clearance above 3/2.
    """
    mags = [abs(s) for s in spectrum.eigenvalues]
    min_abs = min(mags)
    floor = min_abs + _half_like(min_abs)
    delta = floor - 3 * _half_like(min_abs)
    return WittReport(passes=min_abs > spectrum.gap,
                      min_abs=min_abs,
                      implied_nu_floor=floor,
                      delta=delta)


def a_identity(s):
    """Both sides of (|s| + 1/2)^2 - 1/4 = s^2 + |s|; exact for Fractions."""
    half = _half_like(s)
    quarter = half * half
    lhs = (abs(s) + half) ** 2 - quarter
    rhs = s * s + abs(s)
    return lhs, rhs


@dataclass(frozen=True)
class ModelBlock:
    """One fiber cell of the model operator: scalar square or 2x2 block."""

    kind: str
    nu: float
    xi_norm: float = 0.0

    def __post_init__(self):
        if self.kind not in ("scalar_L2", "block_L"):
            raise ConfigurationError(f"unknown block kind {self.kind!r}")
        if self.xi_norm < 0.0:
            raise ConfigurationError("xi_norm must be nonnegative")
        if not self.nu > 1.5:
            raise WittViolationError(
                f"block order nu={self.nu} violates the Witt floor 3/2")

    def kernel(self, delta_min=0.05):
        if self.xi_norm == 0.0:
            return ConeKernel("free", self.nu, delta_min=delta_min)
        return ConeKernel("bessel", self.nu, self.xi_norm, delta_min=delta_min)


def solve_scalar(block: ModelBlock, g, grid: HalfLineGrid):
    """f = K g by Nystrom application of the inverse kernel.

    The finite-difference model operator applied to f reproduces g to O(h^2)
    on the grid interior.
    """
    if block.kind != "scalar_L2":
        raise ConfigurationError("solve_scalar expects a scalar_L2 block")
    g = np.asarray(g, dtype=float)
    m = weighted_kernel_matrix(block.kernel(), WeightedAction(0, 0),
                               grid.nodes, grid.nodes)
    return m @ (grid.weights * g)


def _dx_matrix(grid: HalfLineGrid):
    d1, _ = _t_derivative_matrices(grid)
    return d1 / grid.nodes[:, None]


def block_matrix(block: ModelBlock, grid: HalfLineGrid):
    """Dense 2N x 2N finite-difference matrix of the first-order 2x2 system."""
    if block.kind != "block_L":
        raise ConfigurationError("block_matrix expects a block_L block")
    n = grid.n
    mu = block.nu - 0.5
    beta = block.xi_norm
    dx = _dx_matrix(grid)
    mu_over_x = np.diag(mu / grid.nodes)
    m = np.zeros((2 * n, 2 * n))
    m[:n, :n] = beta * np.eye(n)
    m[:n, n:] = -(dx - mu_over_x)
    m[n:, :n] = dx + mu_over_x
    m[n:, n:] = -beta * np.eye(n)
    return m


def block_apply(block: ModelBlock, f, grid: HalfLineGrid):
    """Apply the discretized 2x2 first-order system to a 2-component function."""
    f = np.asarray(f, dtype=float)
    if f.shape != (2, grid.n):
        raise ConfigurationError("expected a (2, N) component array")
    if not np.all(np.isfinite(f)):
        raise ConfigurationError("components must be finite")
    out = block_matrix(block, grid) @ f.reshape(2 * grid.n)
    return out.reshape(2, grid.n)


def _fd_scalar(coef: float, beta: float, grid: HalfLineGrid):
    """FD matrix of -d^2/dx^2 + coef/x^2 + beta^2 (no Witt validation)."""
    d1, d2 = _t_derivative_matrices(grid)
    inv_x2 = 1.0 / grid.nodes ** 2
    m = -inv_x2[:, None] * (d2 - d1)
    m[np.diag_indices_from(m)] += coef * inv_x2 + beta * beta
    return m


def interior_slice(n: int, fraction: float = 0.8):
    """Central portion of the nodes, excluding boundary-closure artifacts."""
    skip = int(round(0.5 * (1.0 - fraction) * n))
    return slice(skip, n - skip)


def verify_square_identity(nu: float, beta: float, u, grid: HalfLineGrid):
    """Compare (2x2 block applied twice) with the direct scalar squares.

    Composing centered first differences is only O(h) accurate against the
    second-order scalar assembly; the report carries the interior max
    discrepancy so callers can record the refinement order.
    """
    u = np.asarray(u, dtype=float)
    block = ModelBlock("block_L", nu, beta)
    twice = block_apply(block, block_apply(block, u, grid), grid)
    mu = nu - 0.5
    direct = np.vstack([
        _fd_scalar(mu * (mu + 1.0), beta, grid) @ u[0],
        _fd_scalar(mu * (mu - 1.0), beta, grid) @ u[1],
    ])
    sl = interior_slice(grid.n)
    diff = np.max(np.abs(twice[:, sl] - direct[:, sl]))
    scale = max(np.max(np.abs(direct[:, sl])), 1e-300)
    return {"max_discrepancy": float(diff),
            "relative": float(diff / scale),
            "interior_nodes": grid.n - 2 * sl.start}


ACTIONS = (WeightedAction(-2, 0), WeightedAction(-2, 1), WeightedAction(-2, 2))


def uniform_bound_sweep(spectrum: FiberSpectrum, betas, grid_n: int = 400,
                        x_min: float = 1e-4, x_max: float = 1e3,
                        uniform_factor: float = 1.1):
    """Norm table of X^-2 K and its edge derivatives across (nu, beta).

    Each row carries the three estimated norms and the normalized ratios
    (nu^2 - 9/4) ||X^-2 K||, (nu - 3/2) ||(X dx) X^-2 K||, ||(X dx)^2 X^-2 K||.
    "Uniformly bounded" is certified as max <= uniform_factor x median,
    per ratio column.
    """
    report = check_witt(spectrum)
    if not report.passes:
        raise WittViolationError("uniform sweep requires a passing spectrum")
    grid = build_grid(grid_n, x_min, x_max)
    rows = []
    for nu in spectrum.nu_values():
        for beta in betas:
            kern = (ConeKernel("free", nu) if beta == 0.0
                    else ConeKernel("bessel", nu, beta))
            norms = [operator_norm(nystrom_assemble(kern, act, grid,
                                                    refine_diagonal=True))
                     for act in ACTIONS]
            rows.append({
                "nu": nu, "beta": float(beta),
                "norm0": norms[0], "norm1": norms[1], "norm2": norms[2],
                "ratio0": norms[0] * (nu * nu - 2.25),
                "ratio1": norms[1] * nu,
                "ratio2": norms[2],
            })
    summary = {}
    for key in ("ratio0", "ratio1", "ratio2"):
        vals = np.array([r[key] for r in rows])
        summary[key] = {
            "max": float(vals.max()),
            "median": float(np.median(vals)),
            "uniform": bool(vals.max() <= uniform_factor * np.median(vals)),
        }
    return {"rows": rows, "summary": summary}


def homogeneous_solutions(nu: float, beta: float, grid: HalfLineGrid):
    """Samples of the two homogeneous solutions of the scalar model operator.

    beta = 0: x^{nu + 1/2} and x^{-nu + 1/2};
    beta > 0: sqrt(x) I_nu(beta x) and sqrt(x) K_nu(beta x).
    Neither lies in W^{2,2}; their truncated norms diverge under widening.
    """
    x = grid.nodes
    if beta == 0.0:
        return x ** (nu + 0.5), x ** (-nu + 0.5)
    from .bessel import log_bessel_ik
    li, lk, _, _, _ = log_bessel_ik(nu, beta * x)
    with np.errstate(over="ignore"):
        return (np.exp(0.5 * np.log(x) + li), np.exp(0.5 * np.log(x) + lk))
