"""Half-line grids, quadrature, Nystrom/finite-difference assembly, norms.

Everything lives on a truncated half-line [x_min, x_max] with log-spaced
nodes; in the variable t = ln x the edge derivative (x d/dx) is plain d/dt
and the model operator -d^2/dx^2 becomes -x^{-2}(d_t^2 - d_t).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError, WittViolationError
from .kernels import ConeKernel, WeightedAction, weighted_kernel_matrix

X_MIN_DEFAULT = 1e-4
X_MAX_DEFAULT = 1e3
N_DEFAULT = 400
GAUSS_PANEL_NODES = 32

POWER_ITER_TOL = 1e-8
POWER_ITER_MAX = 10_000


@dataclass(frozen=True)
class HalfLineGrid:
    nodes: np.ndarray
    weights: np.ndarray
    scheme: str
    x_min: float
    x_max: float

    @property
    def n(self):
        return self.nodes.size

    @property
    def log_step(self):
        """Uniform spacing in t = ln x (log_trapezoid grids only)."""
        if self.scheme != "log_trapezoid":
            raise ConfigurationError("log_step defined for log_trapezoid grids")
        t = np.log(self.nodes)
        return float(t[1] - t[0])


def build_grid(n: int, x_min: float = X_MIN_DEFAULT,
               x_max: float = X_MAX_DEFAULT,
               scheme: str = "log_trapezoid") -> HalfLineGrid:
    """Log-spaced quadrature grid for integrals over [x_min, x_max].

    log_trapezoid: n log-uniform nodes including the endpoints, trapezoid
    weights in x (sum of weights = x_max - x_min exactly).
    log_gauss_panels: Gauss-Legendre panels of 32 nodes in t = ln x, one
    panel per decade-sized chunk, about n nodes in total.
    """
    if n < 16:
        raise ConfigurationError("grid size must be at least 16")
    if not (0.0 < x_min < x_max):
        raise ConfigurationError("need 0 < x_min < x_max")
    t0, t1 = math.log(x_min), math.log(x_max)
    if scheme == "log_trapezoid":
        nodes = np.exp(np.linspace(t0, t1, n))
        nodes[0], nodes[-1] = x_min, x_max
        w = np.empty(n)
        w[1:-1] = 0.5 * (nodes[2:] - nodes[:-2])
        w[0] = 0.5 * (nodes[1] - nodes[0])
        w[-1] = 0.5 * (nodes[-1] - nodes[-2])
        return HalfLineGrid(nodes, w, scheme, x_min, x_max)
    if scheme == "log_gauss_panels":
        panels = max(1, round(n / GAUSS_PANEL_NODES))
        gl_x, gl_w = np.polynomial.legendre.leggauss(GAUSS_PANEL_NODES)
        edges = np.linspace(t0, t1, panels + 1)
        ts, ws = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            ts.append(mid + half * gl_x)
            ws.append(half * gl_w)
        t = np.concatenate(ts)
        nodes = np.exp(t)
        # dx = x dt turns the t-panel weights into weights for dx-integrals
        w = np.concatenate(ws) * nodes
        return HalfLineGrid(nodes, w, scheme, x_min, x_max)
    raise ConfigurationError(f"unknown grid scheme {scheme!r}")


@dataclass(frozen=True)
class DiscreteOperator:
    """Dense matrix acting on grid samples, with the quadrature metric."""

    matrix: np.ndarray
    grid: HalfLineGrid
    metric_weights: np.ndarray

    def apply(self, u):
        return self.matrix @ np.asarray(u, dtype=float)

    def metric_adjoint(self):
        return DiscreteOperator(
            metric_adjoint_matrix(self.matrix, self.metric_weights),
            self.grid, self.metric_weights)


def metric_adjoint_matrix(matrix, weights):
    """Adjoint of ``matrix`` for the inner product <u, v> = sum w u v."""
    w = np.asarray(weights, dtype=float)
    return (matrix.T * w[None, :]) / w[:, None]


def nystrom_assemble(kernel: ConeKernel, action: WeightedAction,
                     grid: HalfLineGrid,
                     refine_diagonal: bool = False) -> DiscreteOperator:
    """Nystrom matrix M_ij = (weighted kernel)(x_i, x_j) w_j.

    With ``refine_diagonal`` the diagonal entries are product-integrated
    over their quadrature cell with a local Gauss rule.  Derivative kernels
    of Bessel kind concentrate in a band of width 1/beta around the
    diagonal; once the node spacing exceeds that width the plain rule
    inflates the diagonal by the unresolved spike, while the cell integral
    remains faithful.
    """
    m = weighted_kernel_matrix(kernel, action, grid.nodes, grid.nodes)
    m = m * grid.weights[None, :]
    if refine_diagonal:
        np.fill_diagonal(m, _diagonal_cell_integrals(kernel, action, grid))
    return DiscreteOperator(m, grid, grid.weights)


def _diagonal_cell_integrals(kernel: ConeKernel, action: WeightedAction,
                             grid: HalfLineGrid, n_sub: int = 16):
    """integral of the weighted kernel k(x_i, y) over the i-th weight cell."""
    x = grid.nodes
    mids = 0.5 * (x[:-1] + x[1:])
    lo = np.concatenate(([x[0]], mids))
    hi = np.concatenate((mids, [x[-1]]))
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_sub)
    half = 0.5 * (hi - lo)
    ys = 0.5 * (hi + lo)[:, None] + half[:, None] * gl_x[None, :]
    ws = half[:, None] * gl_w[None, :]
    vals = weighted_kernel_matrix(kernel, action, x, ys.ravel())
    n = grid.n
    out = np.empty(n)
    for i in range(n):
        out[i] = vals[i, i * n_sub:(i + 1) * n_sub] @ ws[i]
    return out


def _t_derivative_matrices(grid: HalfLineGrid):
    """(D1, D2): second-order d/dt and d^2/dt^2 on the log-uniform grid.

    One-sided second-order stencils at the two boundary rows; no ghost
    points (Dirichlet-type closure for decaying solutions).
    """
    h = grid.log_step
    n = grid.n
    d1 = np.zeros((n, n))
    d2 = np.zeros((n, n))
    i = np.arange(1, n - 1)
    d1[i, i - 1], d1[i, i + 1] = -0.5 / h, 0.5 / h
    d1[0, :3] = np.array([-1.5, 2.0, -0.5]) / h
    d1[-1, -3:] = np.array([0.5, -2.0, 1.5]) / h
    hh = h * h
    d2[i, i - 1], d2[i, i], d2[i, i + 1] = 1.0 / hh, -2.0 / hh, 1.0 / hh
    d2[0, :4] = np.array([2.0, -5.0, 4.0, -1.0]) / hh
    d2[-1, -4:] = np.array([-1.0, 4.0, -5.0, 2.0]) / hh
    return d1, d2


def fd_assemble_model(nu: float, beta: float,
                      grid: HalfLineGrid) -> DiscreteOperator:
    """Finite-difference matrix for -d^2/dx^2 + x^{-2}(nu^2 - 1/4) + beta^2."""
    if not nu > 1.5:
        raise WittViolationError(f"model operator needs nu > 3/2, got {nu}")
    h = grid.log_step
    if h > 0.25:
        raise ConfigurationError(
            f"log spacing {h:.3f} too coarse to resolve the 1/x^2 potential")
    d1, d2 = _t_derivative_matrices(grid)
    inv_x2 = 1.0 / grid.nodes ** 2
    m = -inv_x2[:, None] * (d2 - d1)
    m[np.diag_indices_from(m)] += (nu * nu - 0.25) * inv_x2 + beta * beta
    return DiscreteOperator(m, grid, grid.weights)


def operator_norm(op: DiscreteOperator, tol: float = POWER_ITER_TOL,
                  max_iter: int = POWER_ITER_MAX) -> float:
    """Largest singular value w.r.t. the weighted inner product.

    Power iteration on M*M with the metric adjoint M* = W^{-1} M^T W;
    deterministic all-ones start.
    """
    if tol <= 0.0:
        raise ConfigurationError("tolerance must be positive")
    m = op.matrix
    w = op.metric_weights
    v = np.ones(m.shape[1])
    v /= math.sqrt(float(w @ v ** 2))
    lam = 0.0
    for it in range(max_iter):
        mv = m @ v
        bv = (m.T @ (w * mv)) / w
        lam_new = float(w @ (bv * v))
        norm_bv = math.sqrt(float(w @ bv ** 2))
        if norm_bv == 0.0:
            return 0.0
        v = bv / norm_bv
        if it > 0 and abs(lam_new - lam) <= tol * max(lam_new, 1e-300):
            return math.sqrt(max(lam_new, 0.0))
        lam = lam_new
    raise NumericalError(
        f"power iteration did not converge in {max_iter} steps; "
        f"last eigenvalue estimate {lam:.6e}")


@dataclass(frozen=True)
class SobolevSpec:
    """Discrete weighted edge Sobolev norm W^{s,delta}."""

    s: int
    delta: float = 0.0
    fiber_weights: tuple = (1.0,)

    def __post_init__(self):
        if self.s not in (0, 1, 2):
            raise ConfigurationError("Sobolev order s must be 0, 1 or 2")
        if len(self.fiber_weights) == 0 or min(self.fiber_weights) <= 0.0:
            raise ConfigurationError("fiber weights must be positive")


def sobolev_norm(u, spec: SobolevSpec, grid: HalfLineGrid) -> float:
    """Discrete W^{s,delta} norm of a fiber-indexed grid function.

    ||u||^2 = sum_{a<=s} ||(x d/dx)^a (x^{-delta} u)||^2
            + sum_j nu_j^{2s} ||(x^{-delta} u)_j||^2   (s >= 1),

    with (x d/dx) realized as d/dt by centered differences.  At s = 0 the
    intersection defining W^s is trivial and the norm is plain weighted L^2.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[0] != len(spec.fiber_weights):
        raise ConfigurationError(
            f"expected {len(spec.fiber_weights)} fiber rows, got {u.shape[0]}")
    if u.shape[1] != grid.n:
        raise ConfigurationError("grid-function length does not match grid")
    if not np.all(np.isfinite(u)):
        raise ConfigurationError("grid function must be finite")
    v = u * grid.nodes[None, :] ** (-spec.delta)
    w = grid.weights
    total = float(np.sum(w[None, :] * v ** 2))
    if spec.s >= 1:
        d1, _ = _t_derivative_matrices(grid)
        dv = v
        for _ in range(spec.s):
            dv = dv @ d1.T
            total += float(np.sum(w[None, :] * dv ** 2))
        nus = np.asarray(spec.fiber_weights, dtype=float)
        total += float(np.sum((nus ** (2 * spec.s))[:, None]
                              * w[None, :] * v ** 2))
    return math.sqrt(total)
