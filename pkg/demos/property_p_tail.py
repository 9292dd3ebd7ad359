"""
A finite head with a contracting tail
=====================================

An operator split into a Jordan head and a tail with ``||A^k|| <= r^k``
behaves like its head.  A weighted shift with no such splitting does not.
"""

from fractions import Fraction

from orbit_verdict import JordanSystem, Scalar
from orbit_verdict.property_p import (
    PropertyPOperator,
    Tail,
    WeightedShift,
    classify_property_p,
    example1_subsequences,
    simulate_norms,
    tail_bound,
    tail_orbit,
)

# Head: a rotation.  Tail: a shift with weights 1/2 on 64 coordinates.
head = JordanSystem.build([(Scalar(0, 1), 1)], x=[[1]], c=[[0]])
tail = Tail.uniform("shift", Fraction(1, 2), 64)
x_tail = (Fraction(3),) + (Fraction(0),) * 63
c_tail = (Fraction(1),) + (Fraction(0),) * 63
op = PropertyPOperator(head, tail, c_tail, x_tail)

# The tail part of the orbit never exceeds the contraction estimate.
states = tail_orbit(op, 20)
for k in (1, 5, 20):
    print(k, float(max(abs(z) for z in states[k])), "<=", float(tail_bound(op, k=k)))

print(classify_property_p(op).kind.value)
norms, label = simulate_norms(op, 50)
print("simulated:", label, round(float(norms[-1]), 4))

# Without the splitting, runs of weights 1/2 and 2 of growing length make
# the orbit of e_0 unbounded while it keeps returning to norm 1 and below.
subs = example1_subsequences(WeightedShift(), 6)
print("decaying", [(k, str(v)) for k, v in subs["decaying"]])
print("growing ", [(k, str(v)) for k, v in subs["growing"]])
print("norm 1 at", subs["unit"][:8])
