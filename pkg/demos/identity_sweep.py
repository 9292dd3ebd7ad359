"""
Checking the binomial identities
================================

Every closed form rests on a handful of binomial identities.  The sweep
evaluates each one exactly over a grid and reports failures per row.
"""

from orbit_verdict.combinatorics import binom, binom_d_polynomial, d_factor, t_sum, t_sum_direct
from orbit_verdict.sweep import SweepConfig, identity_sweep

# One value by hand: the closed form of T_j against the direct sum.
print(t_sum(1, 10, 3), t_sum_direct(1, 10, 3))

# C(k, j) D(k, j, lam) is a polynomial in k.
poly = binom_d_polynomial(2, 3)
print(poly.coeffs, poly(9) == binom(9, 2) * d_factor(9, 2, 3))

for row in identity_sweep(SweepConfig(max_k=20, max_j=6, trials=5, seed=1)):
    print(f"{row.name:20s} {row.cases:6d} cases  {'pass' if row.passed else 'FAIL'}")
