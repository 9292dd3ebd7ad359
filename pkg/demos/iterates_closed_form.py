"""
Iterates of an affine map in Jordan form
========================================

Build a small system, read off its closed form, check it against plain
iteration and ask for the long-run verdict.
"""

from fractions import Fraction

from orbit_verdict import (
    JordanSystem,
    Scalar,
    brute_force_orbit,
    classify_system,
    eval_iterate,
    expand_system,
)

I = Scalar(0, 1)

# Three blocks: a contraction, a rotation carrying a 2-chain, and a
# unipotent block.  ``x`` and ``c`` are given segment by segment.
sys = JordanSystem.build(
    [(Fraction(1, 2), 1), (I, 2), (1, 2)],
    x=[[1], [0, 1], [1, 0]],
    c=[[1], [0, 0], [0, 0]],
)

# The coefficient vectors do not depend on k.
for block, exp in zip(sys.blocks, expand_system(sys)):
    print(f"lambda={block.lam}  s={exp.s} t={exp.t}  {exp}")

# The closed form agrees with iteration exactly once k > max(s, t).
orbit = brute_force_orbit(sys, 12)
exps = expand_system(sys)
for k in (3, 7, 12):
    closed = tuple(eval_iterate(e, k) for e in exps)
    print(k, closed == orbit.states[k].segments)

# The rotation block has A_1 != 0, so its coordinates grow like k.
verdict = classify_system(sys)
print(verdict.kind.value, "-", verdict.witness)

# Dropping the chain leaves a bounded orbit; with c = 0 it is also bounded
# away from 0, and the reported bounds come from a float orbit.
linear = JordanSystem.build([(I, 2), (Fraction(1, 2), 1)], x=[[3, 0], [1]], c=[[0, 0], [0]])
verdict = classify_system(linear, horizon=500)
print(verdict.kind.value, "bounds", verdict.bounds)
