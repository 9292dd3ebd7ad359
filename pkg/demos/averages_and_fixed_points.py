"""
Averages of an orbit and the fixed point
========================================

For a block with eigenvalue ``lam`` outside {0, 1} the average of the first
k iterates is ``E + (F + lam^k H(k)) / k`` with ``H`` a polynomial in k.
The degree of ``H`` decides whether the averages stay bounded, and ``H``
vanishes exactly at the fixed point.
"""

from orbit_verdict import (
    JordanSystem,
    Scalar,
    brute_force_average,
    classify_average_system,
    expand_average_system,
    fixed_point,
    h_polynomial,
)

# A size-2 block with lam = 2 and c = e_1.
c = [[0, 1]]
base = JordanSystem.build([(2, 2)], x=[[0, 0]], c=c)
star = fixed_point(base)
print("fixed point", [str(z) for z in star.segments[0]])

# Move x off the fixed point one coordinate at a time and watch deg H.
for x in ([1, -1], [0, -1], [0, 0]):
    sys = base.with_x(JordanSystem.build([(2, 2)], x=[x], c=c).x)
    exp = expand_average_system(sys)[0]
    h = h_polynomial(exp)
    print(x, "deg H =", h.degree, "->", classify_average_system(sys).kind.value)

# At the fixed point every average equals E.
trace = brute_force_average(base.with_x(star), 10)
print(all(a == star for a in trace.averages))

# On the unit circle a degree-one H gives bounded averages that do not
# converge.  Here A = [[i, 1], [0, i]], c = e_1 and x = e_2.
sys = JordanSystem.build([(Scalar(0, 1), 2)], x=[[0, 1]], c=[[1, 0]])
trace = brute_force_average(sys, 20)
print(classify_average_system(sys).kind.value)
print([round(float(n), 3) for n in trace.norms[:12]])
