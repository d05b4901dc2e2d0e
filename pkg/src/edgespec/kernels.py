"""Green kernels on the half-line and their Schur-test integrals.

Two kernel families invert the model operators -d^2/dx^2 + x^{-2}(nu^2-1/4)
(+ beta^2):

* free (beta = 0):   k(x,y) = (1/2nu) (y/x)^nu (xy)^{1/2}   for y <= x,
* bessel (beta > 0): k(x,y) = (xy)^{1/2} I_nu(beta y) K_nu(beta x), y <= x,

both extended symmetrically.  Weighted variants x^w (x d/dx)^a k are computed
analytically: by power rules for the free kind and by the order recurrences

    (u d/du)[u^k K_m] = (k+m) u^k K_m - u^{k+1} K_{m+1},
    (u d/du)[u^k I_m] = (k+m) u^k I_m + u^{k+1} I_{m+1},

for the Bessel kind.  All evaluation happens in log space; underflow clamps
to zero.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import log_bessel_ik
from .errors import (ConfigurationError, DomainError, PreconditionError,
                     WittViolationError)

DELTA_MIN_DEFAULT = 0.05

KINDS = ("free", "bessel")
WEIGHT_POWERS = (0, -1, -2)
EDGE_DERIVATIVES = (0, 1, 2)


@dataclass(frozen=True)
class ConeKernel:
    """Immutable description of one inverse kernel.

    ``nu`` must clear the spectral gap floor 3/2 + delta_min; the Schur
    integrals diverge as nu -> 3/2.
    """

    kind: str
    nu: float
    beta: float = 0.0
    delta_min: float = DELTA_MIN_DEFAULT

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown kernel kind {self.kind!r}")
        if self.delta_min <= 0.0:
            raise ConfigurationError("delta_min must be positive")
        if not (self.nu >= 1.5 + self.delta_min):
            raise WittViolationError(
                f"order nu={self.nu} below floor 3/2 + {self.delta_min}")
        if self.beta < 0.0:
            raise ConfigurationError("beta must be nonnegative")
        if self.kind == "bessel" and self.beta == 0.0:
            raise ConfigurationError("bessel kernel requires beta > 0")
        if self.kind == "free" and self.beta != 0.0:
            raise ConfigurationError("free kernel requires beta = 0")


@dataclass(frozen=True)
class WeightedAction:
    """Left composition x^weight_power followed by (x d/dx)^edge_derivatives."""

    weight_power: int = 0
    edge_derivatives: int = 0

    def __post_init__(self):
        if self.weight_power not in WEIGHT_POWERS:
            raise ConfigurationError("weight_power must be in {0, -1, -2}")
        if self.edge_derivatives not in EDGE_DERIVATIVES:
            raise ConfigurationError("edge_derivatives must be in {0, 1, 2}")


IDENTITY_ACTION = WeightedAction(0, 0)


def _bessel_terms(nu, w, a, side):
    """Term list [(coef, k_power, order)] for (u d/du)^a [u^{w+1/2} B_nu(u)].

    ``side`` is "K" (sign -1 on the order-raising term) or "I" (sign +1).
    Orders only ever move up, keeping them positive.
    """
    step = -1.0 if side == "K" else 1.0
    terms = {(w + 0.5, 0): 1.0}
    for _ in range(a):
        new = {}
        for (k, off), c in terms.items():
            m = nu + off
            new[(k, off)] = new.get((k, off), 0.0) + c * (k + m)
            new[(k + 1.0, off + 1)] = new.get((k + 1.0, off + 1), 0.0) + c * step
        terms = new
    return [(c, k, nu + off) for (k, off), c in sorted(terms.items()) if c != 0.0]


def _free_branch(nu, w, a, logx, logy, lower, mask):
    """Weighted free-kernel branch value on ``mask`` (zero off it).

    ``lower`` selects the y <= x branch exponents.  The exponent of the
    branch not selected by the mask can overflow, so it is masked to -inf
    before exponentiating.
    """
    if lower:
        ex, ey = w - nu + 0.5, nu + 0.5
    else:
        ex, ey = w + nu + 0.5, -nu + 0.5
    with np.errstate(under="ignore"):
        return (ex ** a) / (2.0 * nu) * np.exp(
            np.where(mask, ex * logx + ey * logy, -np.inf))


def _bessel_x_part(nu, w, a, beta, x, side):
    """(signed sum S, log magnitude offset) of the x-factor term combination.

    The factor is beta^{-(w+1/2)} sum_t c_t u^{k_t} B_{m_t}(u) with u = beta x.
    Returned as (S, lmax) with value = S * exp(lmax), elementwise over x.
    """
    u = beta * np.asarray(x, dtype=float)
    logu = np.log(u)
    terms = _bessel_terms(nu, w, a, side)
    logs = np.empty((len(terms),) + u.shape)
    coefs = np.empty(len(terms))
    for t, (c, k, m) in enumerate(terms):
        li, lk, _, _, _ = log_bessel_ik(m, u)
        lb = lk if side == "K" else li
        logs[t] = k * logu + lb
        coefs[t] = c
    lmax = logs.max(axis=0)
    with np.errstate(under="ignore"):
        s = np.einsum("t,t...->...", coefs, np.exp(logs - lmax))
    return s, lmax - (w + 0.5) * math.log(beta)


def _bessel_y_part(nu, beta, y, side):
    """log of the y-factor y^{1/2} B_nu(beta y), B = I or K per ``side``."""
    y = np.asarray(y, dtype=float)
    li, lk, _, _, _ = log_bessel_ik(nu, beta * y)
    return 0.5 * np.log(y) + (li if side == "I" else lk)


def weighted_kernel_matrix(kernel: ConeKernel, action: WeightedAction, xs, ys):
    """Dense matrix of the weighted kernel at the node grid xs (rows) x ys.

    Entry (i, j) = [x^w (x d/dx)^a k](x_i, y_j); no quadrature weights are
    applied.  Bessel evaluations are O(len(xs) + len(ys)).
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    if np.any(xs <= 0.0) or np.any(ys <= 0.0):
        raise DomainError("kernel arguments must be positive")
    nu, w, a = kernel.nu, action.weight_power, action.edge_derivatives
    lower = ys[None, :] <= xs[:, None]
    if kernel.kind == "free":
        lx, ly = np.log(xs)[:, None], np.log(ys)[None, :]
        return (_free_branch(nu, w, a, lx, ly, True, lower)
                + _free_branch(nu, w, a, lx, ly, False, ~lower))
    beta = kernel.beta
    s_lo, off_lo = _bessel_x_part(nu, w, a, beta, xs, "K")
    s_hi, off_hi = _bessel_x_part(nu, w, a, beta, xs, "I")
    ly_lo = _bessel_y_part(nu, beta, ys, "I")
    ly_hi = _bessel_y_part(nu, beta, ys, "K")
    # mask the unused branch before exponentiating: its log magnitude can
    # overflow even though the selected branch never does
    e_lo = np.where(lower, off_lo[:, None] + ly_lo[None, :], -np.inf)
    e_hi = np.where(lower, -np.inf, off_hi[:, None] + ly_hi[None, :])
    with np.errstate(under="ignore"):
        return s_lo[:, None] * np.exp(e_lo) + s_hi[:, None] * np.exp(e_hi)


def weighted_kernel_eval(kernel: ConeKernel, action: WeightedAction,
                         x: float, y: float) -> float:
    """Pointwise value of x^w (x d/dx)^a k at (x, y)."""
    return float(weighted_kernel_matrix(kernel, action, [x], [y])[0, 0])


def kernel_eval(kernel: ConeKernel, x: float, y: float) -> float:
    """Two-branch kernel value k(x, y); symmetric in its arguments."""
    return weighted_kernel_eval(kernel, IDENTITY_ACTION, x, y)


def free_schur_integrals(nu: float):
    """Closed-form Schur test integrals of the weighted free kernel.

    row = integral of x^{-2} k(x, y) dy over (0, infinity)  = (nu^2 - 9/4)^{-1},
    col = integral of x^{-2} k(x, y) dx over (0, infinity)  = (nu^2 - 1/4)^{-1};
    both independent of the free variable.  Divergent for nu <= 3/2.
    """
    if not nu > 1.5:
        raise WittViolationError(
            f"Schur row integral diverges for nu={nu} <= 3/2")
    return 1.0 / (nu * nu - 2.25), 1.0 / (nu * nu - 0.25)


def product_bound_check(nu: float, alpha: int, beta: float,
                        x: float, y: float):
    """Measured/claimed pair for the Bessel product decay estimates.

    alpha = 0: lhs = |K_nu(beta x) I_nu(beta y)|,       rhs = (1/nu)(y/x)^nu,
    alpha = 1: lhs = |x K_{nu+1}(beta x) I_nu(beta y)|, rhs = (y/x)^nu.

    The claim lhs <= C rhs holds with a constant depending only on the gap
    nu - 3/2; the harness fits C empirically over sweeps.
    """
    if alpha not in (0, 1):
        raise ConfigurationError("alpha must be 0 or 1")
    if y > x:
        raise PreconditionError("product bound requires y <= x")
    if beta <= 0.0 or x <= 0.0 or y <= 0.0:
        raise DomainError("beta, x, y must be positive")
    li, _, _, _, _ = log_bessel_ik(nu, np.array([beta * y]))
    _, lk, _, _, _ = log_bessel_ik(nu + alpha, np.array([beta * x]))
    log_lhs = float(li[0] + lk[0]) + (math.log(x) if alpha == 1 else 0.0)
    log_rhs = nu * math.log(y / x) - (math.log(nu) if alpha == 0 else 0.0)
    with np.errstate(under="ignore"):
        return float(np.exp(log_lhs)), float(np.exp(log_rhs))


def decay_estimate_check(kernel: ConeKernel, y_nodes, y_weights, u_values,
                         x: float):
    """(|Ku(x)|, |(x d/dx) Ku(x)|) for u supported in [0, 1] and x > 1.

    Ku(x) is evaluated by quadrature over the support nodes; the derivative
    uses the analytic derivative kernel.  The claimed decay is
    |Ku(x)| <= (C/nu) ||u|| x^{-1-delta} with delta = nu - 3/2.
    """
    y_nodes = np.asarray(y_nodes, dtype=float)
    y_weights = np.asarray(y_weights, dtype=float)
    u_values = np.asarray(u_values, dtype=float)
    if not x > 1.0:
        raise PreconditionError("decay estimate is for x > 1")
    if np.any((y_nodes > 1.0) & (u_values != 0.0)):
        raise PreconditionError("u must be supported inside [0, 1]")
    mask = u_values != 0.0
    if not np.any(mask):
        return 0.0, 0.0
    yn, wn, un = y_nodes[mask], y_weights[mask], u_values[mask]
    row0 = weighted_kernel_matrix(kernel, IDENTITY_ACTION, [x], yn)[0]
    row1 = weighted_kernel_matrix(kernel, WeightedAction(0, 1), [x], yn)[0]
    return abs(float(row0 @ (wn * un))), abs(float(row1 @ (wn * un)))
