"""Tour of the modified Bessel evaluator and its error accounting.

Run:  python3 demos/bessel_accuracy.py
"""

import math

import numpy as np

from edgespec.bessel import (ASYMPTOTIC_MIN_ORDER, bessel_i, bessel_k,
                             log_bessel_ik, log_ik_uniform_asymptotic)

print("Branches: ascending series / Temme / Steed continued fractions below")
print(f"order {ASYMPTOTIC_MIN_ORDER:.0f}, 4-term uniform asymptotics above.\n")

print("Point values with their guaranteed relative error bounds:")
for nu, x in ((2.0, 1.0), (2.5, 3.0), (5.0, 1.0)):
    i = bessel_i(nu, x)
    k = bessel_k(nu, x)
    print(f"  I_{nu}({x}) = {i.value:.12g}   (err <= {i.err_bound:.1e},"
          f" {i.method})")
    print(f"  K_{nu}({x}) = {k.value:.12g}   (err <= {k.err_bound:.1e},"
          f" {k.method})")

print("\nExtreme parameters stay finite in scaled mode:")
i = bessel_i(1e4, 1e6, scaled=True)
k = bessel_k(1e4, 1e6, scaled=True)
print(f"  scaled I_1e4(1e6) = {i.value:.6g},  scaled K = {k.value:.6g}")

print("\nWronskian identity x (I_nu K_nu+1 + I_nu+1 K_nu) = 1,")
print("worst residual over a 50x50 (nu, x) log grid:")
nus = np.exp(np.linspace(math.log(0.5), math.log(50.0), 50))
xs = np.exp(np.linspace(math.log(1e-3), math.log(1e3), 50))
worst = 0.0
for nu in nus:
    li0, lk0, *_ = log_bessel_ik(nu, xs)
    li1, lk1, *_ = log_bessel_ik(nu + 1.0, xs)
    prod = np.exp(li0 + lk1) + np.exp(li1 + lk0)
    worst = max(worst, float(np.max(np.abs(xs * prod - 1.0))))
print(f"  {worst:.3e}")

print("\nUniform asymptotics vs the recurrence branch (true error / bound):")
xg = np.exp(np.linspace(math.log(0.5), math.log(400.0), 25))
for mu in (10.0, 20.0, 40.0):
    li_r, lk_r, *_ = log_bessel_ik(mu, xg)
    li_a, lk_a, ei, ek = log_ik_uniform_asymptotic(mu, xg)
    err = max(np.max(np.abs(np.expm1(li_a - li_r))),
              np.max(np.abs(np.expm1(lk_a - lk_r))))
    print(f"  mu = {mu:5.1f}: error {err:.2e}  <=  bound {max(ei.max(), ek.max()):.2e}")
print("the bound contracts ~16x per octave of mu (mu^-4 scaling).")
