from __future__ import annotations

import random
from fractions import Fraction

import pytest

from orbit_verdict.averages import (
    brute_force_average,
    classify_average_system,
    eval_average,
    eval_average_factored,
    eval_average_system,
    expand_average_block,
    expand_average_system,
    fixed_point,
    fixed_point_condition,
    h_polynomial,
    unit_average_polynomial,
)
from orbit_verdict.errors import DomainError
from orbit_verdict.gallery import example3_system
from orbit_verdict.jordan import JordanBlock, JordanSystem, apply_affine, block_norm
from orbit_verdict.sampling import STRUCTURED_POOL, perturbation_family, random_segment, system_pool
from orbit_verdict.scalar import Scalar
from orbit_verdict.verdict import Kind

I = Scalar(0, 1)
HALF = Scalar("1/2")
TWO = Scalar(2)


def single(lam, x, c):
    return JordanSystem.build([(lam, len(x))], x=[list(x)], c=[list(c)])


# -- expansion and evaluation --------------------------------------------------------


def test_unit_chain_of_length_one_is_constant():
    e = expand_average_block(JordanBlock(Scalar(1), 2), (5, 0), (0, 0))
    assert e.s == 1 and e.t == 0
    for k in (1, 2, 9):
        assert eval_average(e, k) == (5, 0)


def test_geometric_average():
    x = Scalar(3)
    e = expand_average_block(JordanBlock(TWO, 1), (x,), (0,))
    assert e.Aavg == ((x,),) and e.F == (-x,)
    assert eval_average(e, 4) == (Fraction(15, 4) * x,)


def test_trivial_average_is_zero():
    e = expand_average_block(JordanBlock(HALF, 3), (0, 0, 0), (0, 0, 0))
    assert eval_average(e, 1) == (0, 0, 0)
    assert h_polynomial(e).is_zero()


def test_eval_average_domain():
    e = expand_average_block(JordanBlock(TWO, 2), (0, 1), (0, 0))
    with pytest.raises(DomainError):
        eval_average(e, 2)
    with pytest.raises(DomainError):
        eval_average_factored(e, 0)


def test_oracle_equivalence_sample():
    for sys in system_pool(30, seed=21):
        exps = expand_average_system(sys)
        trace = brute_force_average(sys, 30)
        lo = max(e.min_k for e in exps)
        for k in range(lo, 31):
            assert eval_average_system(exps, k) == trace.averages[k - 1]


def test_factored_form_holds_for_every_k():
    for sys in system_pool(30, seed=22, pool=STRUCTURED_POOL + (Scalar(3), Scalar(-1))):
        trace = brute_force_average(sys, 15)
        exps = expand_average_system(sys)
        for k in range(1, 16):
            got = tuple(eval_average_factored(e, k) for e in exps)
            assert got == trace.averages[k - 1].segments


def test_g_factorization():
    rng = random.Random(4)
    for lam in STRUCTURED_POOL + (Scalar(3),):
        for n in range(1, 5):
            d = random_segment(rng, n)
            v = tuple(rng.choice([0, 1, -2, Fraction(1, 3)]) for _ in range(n))
            e = expand_average_block(JordanBlock(lam, n), v, d)
            h = h_polynomial(e)
            for k in range(e.w + 1, e.w + 21):
                ave = eval_average(e, k)
                g = tuple(a - b - f * Fraction(1, k) for a, b, f in zip(ave, e.E, e.F))
                assert tuple(z * k * lam ** (-k) for z in g) == h(k)


def test_unit_average_polynomial():
    sys = single(1, (1, 2, 0), (3, 0, 0))
    e = expand_average_system(sys)[0]
    polys = unit_average_polynomial(e)
    trace = brute_force_average(sys, 12)
    for k in range(1, 13):
        assert tuple(p(k) for p in polys) == trace.averages[k - 1].segments[0]
    with pytest.raises(DomainError):
        unit_average_polynomial(expand_average_block(JordanBlock(TWO, 1), (1,), (0,)))


# -- H and the fixed-point conditions -------------------------------------------------


def test_h_examples():
    block = JordanBlock(TWO, 2)
    assert h_polynomial(expand_average_block(block, (1, -1), (0, 1))).is_zero()
    h = h_polynomial(expand_average_block(block, (0, 0), (0, 1)))
    assert h.degree == 1 and h.leading is not None
    with pytest.raises(DomainError):
        h_polynomial(expand_average_block(JordanBlock(Scalar(0), 1), (1,), (0,)))


def test_h_rule_names():
    block = JordanBlock(TWO, 3)
    assert h_polynomial(expand_average_block(block, (1, 1, 0), (1, 0, 0))).rule == "A_{s-1}"
    assert h_polynomial(expand_average_block(block, (1, 0, 0), (1, 1, 0))).rule == "N^{t-1}c"
    assert h_polynomial(expand_average_block(block, (1, 0, 0), (1, 0, 0))).rule == "s=t"


def test_fixed_point_condition_examples():
    block = JordanBlock(TWO, 2)
    c = (0, 1)
    star = fixed_point(single(TWO, (0, 0), c)).segments[0]
    assert star == (1, -1)
    assert all(fixed_point_condition(block, star, c, i) for i in range(2))
    assert fixed_point_condition(block, (0, -1), c, 1)
    assert h_polynomial(expand_average_block(block, (0, -1), c)).degree <= 0
    assert not fixed_point_condition(block, (0, 0), c, 1)
    with pytest.raises(DomainError):
        fixed_point_condition(block, star, c, 2)
    with pytest.raises(DomainError):
        fixed_point_condition(JordanBlock(Scalar(1), 2), star, c, 1)


def test_degree_matches_conditions_on_perturbations():
    for sys, q in perturbation_family(40, seed=9):
        block, v, d = sys.blocks[0], sys.x.segments[0], sys.c.segments[0]
        h = h_polynomial(expand_average_block(block, v, d))
        if q < 0:
            assert h.is_zero()
        else:
            assert h.degree == q
        for i in range(block.size):
            holds = all(fixed_point_condition(block, v, d, j) for j in range(i, block.size))
            assert holds == (h.degree <= i - 1)


# -- fixed points -------------------------------------------------------------------


def test_fixed_point_examples():
    assert fixed_point(single(HALF, (0,), (1,))).segments == ((2,),)
    sys = single(TWO, (0, 0), (0, 1))
    star = fixed_point(sys)
    assert apply_affine(sys, star) == star
    assert fixed_point(single(3, (1, 1), (0, 0))).is_zero()


def test_fixed_point_is_fixed_on_random_systems():
    for sys in system_pool(40, seed=2, pool=STRUCTURED_POOL + (Scalar(0), Scalar(-1))):
        star = fixed_point(sys)
        assert apply_affine(sys, star) == star


def test_fixed_point_unit_block():
    sys = single(1, (0, 0, 0), (1, 2, 0))
    star = fixed_point(sys)
    assert apply_affine(sys, star) == star
    with pytest.raises(DomainError):
        fixed_point(single(1, (0, 0), (0, 1)))


def test_average_at_fixed_point_is_e():
    sys = single(TWO, (1, -1), (0, 1))
    e = expand_average_system(sys)[0]
    trace = brute_force_average(sys, 20)
    for k in range(1, 21):
        assert trace.averages[k - 1].segments[0] == e.E
        assert eval_average_factored(e, k) == e.E


# -- classification ---------------------------------------------------------------------


def test_classify_examples():
    sys = single(1, (1, 2, 0), (-2, 0, 0))  # N^i c + N^{i+1} x = 0
    assert classify_average_system(sys).kind is Kind.CONVERGES_TO_CONSTANT
    trace = brute_force_average(sys, 10)
    assert all(a.segments[0] == (1, 2, 0) for a in trace.averages)
    assert classify_average_system(single(I, (0,), (1,))).kind in (
        Kind.BOUNDED,
        Kind.CONVERGES_TO_CONSTANT,
    )
    assert classify_average_system(single(TWO, (1,), (0,))).kind is Kind.DIVERGES


def test_unit_circle_degree_rules():
    lam = Scalar("3/5", "4/5")
    assert classify_average_system(single(lam, (0, 0, 1), (0, 0, 0))).kind is Kind.DIVERGES
    assert classify_average_system(single(lam, (0, 1), (0, 0))).kind is Kind.BOUNDED_AWAY
    assert classify_average_system(single(lam, (1, 0), (0, 0))).kind is Kind.CONVERGES_TO_ZERO


def test_linear_average_trichotomy():
    for sys in system_pool(60, seed=8, linear=True):
        assert classify_average_system(sys).kind in (
            Kind.DIVERGES,
            Kind.CONVERGES_TO_ZERO,
            Kind.BOUNDED_AWAY,
        )


def test_zero_eigenvalue_block_converges_to_eventual_constant():
    sys = single(0, (1, 2, 3), (4, 5, 6))
    v = classify_average_system(sys)
    assert v.kind is Kind.CONVERGES_TO_CONSTANT
    trace = brute_force_average(sys, 4000, mode="float")
    limit = [complex(z) for z in v.limit.segments[0]]
    assert max(abs(a - b) for a, b in zip(trace.averages[-1], limit)) < 0.05


# -- the example3 gallery system --------------------------------------------------


def test_example3_subsequences():
    sys = example3_system()
    trace = brute_force_average(sys, 200)
    vnorm = block_norm(sys.x)
    assert trace.averages[4].segments[0] == (0, Fraction(1, 5))
    for k in range(1, 201, 4):
        assert trace.norms[k - 1] <= vnorm / k
    assert min(trace.norms[k - 1] for k in range(2, 201, 4)) > Fraction(1, 2)


def test_average_k1_is_x():
    for sys in system_pool(10, seed=13):
        assert brute_force_average(sys, 1).averages[0] == sys.x
    with pytest.raises(DomainError):
        brute_force_average(sys, 0)


def test_float_average_trace():
    sys = single(HALF, (0,), (1,)).to_float()
    trace = brute_force_average(sys, 100)
    assert abs(trace.averages[-1][0] - 2) < 0.05
    assert trace.empirical == "bounded"
