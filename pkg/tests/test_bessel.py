"""Tests for the modified Bessel evaluator.

Reference values were frozen from a 30-digit mpmath run; log-scale values
are compared absolutely (log error ~ relative error of the function value).
"""

import math

import numpy as np
import pytest

from edgespec.bessel import (ASYMPTOTIC_MIN_ORDER, BesselEval,
                             asymptotic_error_bounds, bessel_i, bessel_k,
                             bessel_log_derivatives, log_bessel_ik,
                             log_ik_uniform_asymptotic, olver_eta,
                             olver_u_polys)
from edgespec.errors import ConfigurationError, DomainError, OverflowModeError

# (nu, x, I_nu(x), K_nu(x)) -- mpmath besseli/besselk, dps=30
POINT_ORACLE = [
    (2.0, 1.0, 0.135747669767038281, None),
    (2.0, 2.0, None, 0.253759754566055863),
    (5.0, 1.0, 0.000271463155956971875, 360.960589601240701),
    (2.5, 3.0, 1.51533944668196514, 0.0840606319741173827),
]

# (nu, x, log I, log K) for points where the plain value under/overflows
LOG_ORACLE = [
    (100.0, 50.0, -35.8378338238783042, 30.4279386819363359),
    (1.6, 0.001, -12.5188557026624674, 11.3557045724144321),
    (3.0, 200.0, 196.409973225314698, -202.401547139561067),
]


@pytest.mark.parametrize("nu,x,ref_i,ref_k", POINT_ORACLE)
def test_point_values(nu, x, ref_i, ref_k):
    if ref_i is not None:
        ev = bessel_i(nu, x)
        assert abs(ev.value - ref_i) <= max(ev.err_bound, 1e-12) * ref_i
    if ref_k is not None:
        ev = bessel_k(nu, x)
        assert abs(ev.value - ref_k) <= max(ev.err_bound, 1e-12) * ref_k


@pytest.mark.parametrize("nu,x,log_i,log_k", LOG_ORACLE)
def test_log_values(nu, x, log_i, log_k):
    li, lk, ei, ek, _ = log_bessel_ik(nu, np.array([x]))
    assert abs(li[0] - log_i) <= max(ei[0], 1e-11)
    assert abs(lk[0] - log_k) <= max(ek[0], 1e-11)


def test_error_bound_fields_positive():
    for nu in (0.7, 3.0, 40.0, 300.0):
        _, _, ei, ek, meth = log_bessel_ik(nu, np.array([0.01, 1.0, 50.0]))
        assert np.all(ei > 0.0) and np.all(ek > 0.0)
        want = 1 if nu >= ASYMPTOTIC_MIN_ORDER else 0
        assert np.all(meth == want)


def test_wronskian_identity_grid():
    # x (I_nu K_{nu+1} + I_{nu+1} K_nu) = 1 exactly
    nus = np.exp(np.linspace(math.log(0.5), math.log(50.0), 12))
    xs = np.exp(np.linspace(math.log(1e-3), math.log(1e3), 12))
    for nu in nus:
        li0, lk0, *_ = log_bessel_ik(nu, xs)
        li1, lk1, *_ = log_bessel_ik(nu + 1.0, xs)
        prod = np.exp(li0 + lk1) + np.exp(li1 + lk0)
        assert np.max(np.abs(xs * prod - 1.0)) <= 1e-10


def test_scaled_mode_no_overflow():
    ev_i = bessel_i(1e4, 1e6, scaled=True)
    ev_k = bessel_k(1e4, 1e6, scaled=True)
    assert math.isfinite(ev_i.value) and ev_i.value > 0.0
    assert math.isfinite(ev_k.value) and ev_k.value > 0.0
    assert ev_i.log_scaled and ev_k.log_scaled
    # the scaled pair multiplies back to I*K; cross-check against the
    # large-argument product expansion I_nu K_nu ~ 1/(2 sqrt(nu^2+x^2))
    li, lk, *_ = log_bessel_ik(1e4, np.array([1e6]))
    prod = math.exp(float(li[0] + lk[0]))
    approx = 1.0 / (2.0 * math.hypot(1e4, 1e6))
    assert abs(prod - approx) <= 1e-4 * approx


def test_unscaled_overflow_raises():
    with pytest.raises(OverflowModeError):
        bessel_i(2.0, 800.0)
    with pytest.raises(OverflowModeError):
        bessel_k(2.0, 1e-300)


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_i(-1.0, 1.0)
    with pytest.raises(DomainError):
        bessel_k(2.0, 0.0)
    with pytest.raises(DomainError):
        log_bessel_ik(2.0, np.array([1.0, -3.0]))


def test_log_derivatives():
    # x I_3(3) + 2 I_2(3) and 2 K_2(3) - 3 K_3(3), mpmath dps=30
    xdi, xdk = bessel_log_derivatives(2.0, 3.0)
    assert abs(xdi - 7.36968577034792588) <= 1e-9 * abs(7.36968577034792588)
    assert abs(xdk - (-0.243490210328066628)) <= 1e-9 * 0.243490210328066628


def test_u_polynomials_exact():
    from fractions import Fraction
    frame = olver_u_polys(3)
    assert frame.u_polys[0] == (Fraction(1),)
    # U_1(p) = (3p - 5p^3)/24
    assert frame.u_polys[1] == (Fraction(0), Fraction(1, 8), Fraction(0),
                                Fraction(-5, 24))
    # U_2(p) = (81p^2 - 462p^4 + 385p^6)/1152
    assert frame.u_polys[2] == (Fraction(0), Fraction(0), Fraction(81, 1152),
                                Fraction(0), Fraction(-462, 1152),
                                Fraction(0), Fraction(385, 1152))
    assert all(tv > 0.0 for tv in frame.tv_bounds[1:])


def test_u_poly_bad_count():
    with pytest.raises(ConfigurationError):
        olver_u_polys(0)
    with pytest.raises(ConfigurationError):
        olver_u_polys(9)


def test_eta_monotone():
    x = np.linspace(0.05, 30.0, 200)
    e = olver_eta(x)
    assert np.all(np.diff(e) > 0.0)
    assert np.all(np.diff(e - np.log(x)) > 0.0)
    with pytest.raises(DomainError):
        olver_eta(0.0)


def test_olver_branch_within_bounds():
    # the asymptotic branch checked against the series/CF branch, which is
    # several orders of magnitude more accurate at these orders
    xs = np.exp(np.linspace(math.log(0.5), math.log(400.0), 17))
    for mu in (10.0, 20.0, 40.0):
        li_r, lk_r, *_ = log_bessel_ik(mu, xs)
        li_a, lk_a, ei, ek = log_ik_uniform_asymptotic(mu, xs)
        assert np.all(np.abs(np.expm1(li_a - li_r)) <= ei)
        assert np.all(np.abs(np.expm1(lk_a - lk_r)) <= ek)


def test_asymptotic_bounds_scale():
    b10 = max(asymptotic_error_bounds(10.0, 5.0))
    b20 = max(asymptotic_error_bounds(20.0, 10.0))
    ratio = b10 / b20
    assert 8.0 <= ratio <= 32.0  # nu^-4 scaling within a factor of 2


def test_method_reporting():
    assert bessel_i(2.0, 1.0).method == "series"
    assert bessel_i(2.0, 50.0).method == "recurrence"
    assert bessel_i(300.0, 1.0).method == "uniform_asymptotic"
    assert isinstance(bessel_i(2.0, 1.0), BesselEval)
