"""Acceptance criteria 1-8.

Each test records ``(passed, detail)`` under its criterion number before
asserting; the terminal summary hook in ``conftest.py`` prints one line per
criterion.
"""
from __future__ import annotations

import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from orbit_verdict.averages import (
    brute_force_average,
    classify_average_system,
    eval_average,
    eval_average_factored,
    expand_average_block,
    expand_average_system,
    fixed_point,
    fixed_point_condition,
    h_polynomial,
)
from orbit_verdict.errors import DomainError
from orbit_verdict.gallery import example2_report, example3_report
from orbit_verdict.iterates import (
    brute_force_orbit,
    classify_system,
    eval_iterate,
    expand_system,
)
from orbit_verdict.jordan import JordanSystem
from orbit_verdict.property_p import (
    PropertyPOperator,
    Tail,
    WeightedShift,
    check_contraction,
    classify_property_p,
    example1_subsequences,
    simulate_norms,
    tail_bound,
    tail_orbit,
    triangular,
    weighted_shift_orbit,
)
from orbit_verdict.sampling import LAMBDA_POOL, perturbation_family, system_pool
from orbit_verdict.scalar import Scalar, modulus
from orbit_verdict.sweep import SweepConfig, identity_sweep
from orbit_verdict.verdict import DIVERGENCE_FACTOR, Kind

DATA = Path(__file__).parent / "data"

# Dyadic denominators keep every fixed point exactly representable in
# floats, so a repelling block started at its fixed point stays there in the
# float oracle too (all 1/(1-lam) in the pool are dyadic as well).
POOL = system_pool(240, seed=2024, denominators=(1, 2, 4))
LINEAR_POOL = system_pool(60, seed=7, denominators=(1, 2, 4), linear=True)
K_MAX = 60
FLOAT_HORIZON = 10**4


def record(acceptance, key, ok, detail):
    acceptance[key] = (bool(ok), detail)
    assert ok, detail


def test_pool_matches_the_required_shape():
    assert len(POOL) >= 200
    assert all(len(s.blocks) <= 4 and max(s.sizes) <= 5 for s in POOL)
    used = {b.lam for s in POOL for b in s.blocks}
    assert used == set(LAMBDA_POOL)


# -- 1 ---------------------------------------------------------------------------


def test_criterion_1_iterate_oracle_equivalence(acceptance):
    start = time.perf_counter()
    checked = mismatches = 0
    for sys_ in POOL:
        exps = expand_system(sys_)
        orbit = brute_force_orbit(sys_, K_MAX, mode="exact")
        for i, e in enumerate(exps):
            for k in range(max(e.s, e.t) + 1, K_MAX + 1):
                checked += 1
                if eval_iterate(e, k) != orbit.states[k].segments[i]:
                    mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    record(
        acceptance,
        1,
        ok,
        f"{len(POOL)} systems, {checked} block iterates, {mismatches} mismatches, {elapsed:.1f}s (limit 60s)",
    )


# -- 2 ---------------------------------------------------------------------------


def test_criterion_2_average_oracle_equivalence(acceptance):
    start = time.perf_counter()
    checked = mismatches = 0
    for sys_ in POOL:
        exps = expand_average_system(sys_)
        trace = brute_force_average(sys_, K_MAX, mode="exact")
        for i, e in enumerate(exps):
            for k in range(e.min_k, K_MAX + 1):
                checked += 1
                if eval_average(e, k) != trace.averages[k - 1].segments[i]:
                    mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 120
    record(
        acceptance,
        2,
        ok,
        f"{len(POOL)} systems, {checked} block averages, {mismatches} mismatches, {elapsed:.1f}s (limit 120s)",
    )


# -- 3 ---------------------------------------------------------------------------


def test_criterion_3_identity_grid(acceptance):
    rows = identity_sweep(SweepConfig(max_k=30, max_j=10, trials=10, seed=0))
    failures = sum(r.failures for r in rows)
    cases = sum(r.cases for r in rows)
    bad = [r.name for r in rows if not r.passed]
    record(
        acceptance,
        3,
        failures == 0,
        f"{len(rows)} identity rows, {cases} cases, {failures} failures" + (f" in {bad}" if bad else ""),
    )


# -- 4 ---------------------------------------------------------------------------


def test_criterion_4_fixed_point_conditions(acceptance):
    blocks = discrepancies = systems = 0
    for sys_, q in perturbation_family(110, seed=31):
        systems += 1
        blocks += q < 0
        block, v, d = sys_.blocks[0], sys_.x.segments[0], sys_.c.segments[0]
        h = h_polynomial(expand_average_block(block, v, d))
        for i in range(block.size):
            holds = all(fixed_point_condition(block, v, d, j) for j in range(i, block.size))
            discrepancies += holds != (h.degree <= i - 1)
        at_fixed_point = sys_.x == fixed_point(sys_)
        discrepancies += h.is_zero() != at_fixed_point
        if at_fixed_point:
            exp = expand_average_system(sys_)[0]
            trace = brute_force_average(sys_, 40, mode="exact")
            for k in range(2, 41):
                discrepancies += trace.averages[k - 1].segments[0] != exp.E
                discrepancies += eval_average_factored(exp, k) != exp.E
    ok = discrepancies == 0 and blocks >= 100
    record(
        acceptance,
        4,
        ok,
        f"{blocks} structured blocks, {systems} systems incl. perturbations, {discrepancies} discrepancies",
    )


# -- 5 ---------------------------------------------------------------------------


def test_criterion_5_example_regressions(acceptance):
    norms = weighted_shift_orbit(WeightedShift(64), triangular(6))
    ex1 = [norms[triangular(n)] for n in range(1, 7)]
    ex1_ok = ex1 == [Fraction(1, 2), 2, Fraction(1, 4), 4, Fraction(1, 8), 8]
    ex2 = example2_report(cycles=25)
    ex2_ok = all(ex2["checks"].values())
    ex3 = example3_report(K=1000)
    ex3_ok = ex3["checks"]["|Ave_k|<=|v|/k for k=1 mod 4"] and ex3["max_norm"] > 0
    floor = ex3["min_norm_k=2_mod_4"]
    ok = ex1_ok and ex2_ok and ex3_ok and floor > 0
    record(
        acceptance,
        5,
        ok,
        f"example1 norms {[str(v) for v in ex1]}; example2 cycle holds for n<=25: {ex2_ok}; "
        f"example3 max |Ave_k| = {float(ex3['max_norm']):.4f}, min over k=2 mod 4 = {float(floor):.4f}",
    )


# -- 6 ---------------------------------------------------------------------------


def _contradiction(verdict, norms, empirical, scale) -> str | None:
    diverges = verdict.kind is Kind.DIVERGES
    if diverges and empirical != "diverges":
        return "diverging verdict, bounded orbit"
    if not diverges and (empirical != "bounded" or np.max(norms) > DIVERGENCE_FACTOR * scale):
        return "bounded verdict, orbit past threshold"
    return None


def test_criterion_6_dichotomy_consistency(acceptance):
    start = time.perf_counter()
    systems = POOL + LINEAR_POOL
    contradictions = []
    literal = growth = bounded = 0
    for n, sys_ in enumerate(systems):
        for label, verdict, run in (
            ("iterates", classify_system(sys_), brute_force_orbit),
            ("averages", classify_average_system(sys_), brute_force_average),
        ):
            trace = run(sys_, FLOAT_HORIZON, mode="float")
            norms = np.asarray(trace.norms, dtype=float)
            why = _contradiction(verdict, norms, trace.empirical, trace.scale)
            if why:
                contradictions.append(f"system {n} {label}: {why}")
            if verdict.kind is Kind.DIVERGES:
                if trace.overflow_step is not None or norms.max() > DIVERGENCE_FACTOR * trace.scale:
                    literal += 1
                else:
                    growth += 1
            else:
                bounded += 1
    elapsed = time.perf_counter() - start
    record(
        acceptance,
        6,
        not contradictions,
        f"{2 * len(systems)} verdicts at horizon 10^4: {bounded} bounded stay below 10^6*scale, "
        f"{literal} diverging pass 10^6*scale, {growth} diverging with polynomial growth "
        f"flagged by the trend test; {len(contradictions)} contradictions; {elapsed:.1f}s"
        + (f"; first: {contradictions[0]}" if contradictions else ""),
    )


# -- 7 ---------------------------------------------------------------------------


def _sup(y):
    return max((modulus(z) for z in y), default=0)


def _sampled_tail(rng: random.Random):
    while True:
        n = rng.randint(2, 16)
        kind = rng.choice(("diagonal", "shift"))
        r = Fraction(rng.randint(1, 9), 10)
        steps = rng.randint(1, 3)
        weights = [r * Fraction(rng.randint(0, 10), 10) for _ in range(n)]
        if steps > 1:
            weights[rng.randrange(n)] = Fraction(rng.randint(10, 18), 10)
        tail = Tail(kind, tuple(weights), r, steps)
        if check_contraction(tail, 40):
            return tail


def _tail_orbits_bounded(rng: random.Random, count: int) -> tuple:
    checked = violations = 0
    sampled = 0
    while sampled < count:
        tail = _sampled_tail(rng)
        n = tail.truncation
        x = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]
        c = [Fraction(rng.randint(-3, 3), 2) if rng.random() < 0.5 else 0 for _ in range(n)]
        if tail.kind == "shift":
            # keep the orbit on the truncated space: mass moves up one slot per step
            keep = rng.randint(1, n // 2)
            x[keep:] = [0] * (n - keep)
            c[1:] = [0] * (n - 1)
            weights = list(tail.weights)
            weights[n // 2 :] = [0] * (n - n // 2)
            tail = Tail("shift", tuple(weights), tail.r, tail.N)
        op = PropertyPOperator(None, tail, tuple(c), tuple(x))
        states = tail_orbit(op, 30)
        sampled += 1
        for k in range(tail.N, 31):
            checked += 1
            violations += _sup(states[k]) > tail_bound(op, k=k)
    return checked, violations


def _mixed_instances(rng: random.Random, count: int, horizon: int) -> tuple:
    pool = [Scalar(2), Scalar(3), Scalar("1/2"), Scalar(0, 1), Scalar(-1), Scalar("3/5", "4/5"), Scalar(1), Scalar(0)]
    mismatches = []
    for n in range(count):
        lam = pool[n % len(pool)]
        size = rng.randint(1, 3)
        head = JordanSystem.build(
            [(lam, size)],
            x=[[Fraction(rng.randint(-2, 2), rng.choice((1, 2))) for _ in range(size)]],
            c=[[rng.choice((0, 0, 1)) for _ in range(size)]],
        )
        kind = "diagonal" if n % 2 else "shift"
        r = Fraction(rng.randint(1, 9), 10)
        trunc = 24 if kind == "diagonal" else horizon + 2
        tail = Tail.uniform(kind, r, trunc)
        x_tail = (Fraction(rng.randint(-4, 4)),) + (Fraction(0),) * (trunc - 1)
        c_tail = (Fraction(rng.choice((0, 1))),) + (Fraction(0),) * (trunc - 1)
        op = PropertyPOperator(head, tail, c_tail, x_tail)
        verdict = classify_property_p(op)
        norms, label = simulate_norms(op, horizon)
        expected = "diverges" if verdict.kind is Kind.DIVERGES else "bounded"
        if label != expected:
            mismatches.append(f"instance {n}: verdict {verdict.kind.value}, simulated {label}")
    return mismatches


def test_criterion_7_property_p_suite(acceptance):
    rng = random.Random(77)
    checked, violations = _tail_orbits_bounded(rng, 100)
    mismatches = _mixed_instances(rng, 50, FLOAT_HORIZON)
    subs = example1_subsequences(WeightedShift(), 6)
    decaying = [v for _, v in subs["decaying"]] == [Fraction(1, 2**n) for n in range(1, 7)]
    growing = [v for _, v in subs["growing"]] == [2**n for n in range(1, 7)]
    returns = len(subs["unit"]) >= 6
    ok = violations == 0 and not mismatches and decaying and growing and returns
    record(
        acceptance,
        7,
        ok,
        f"tail_bound held on 100 orbits ({checked} steps, {violations} violations); "
        f"{50 - len(mismatches)}/50 head+tail verdicts match horizon-10^4 simulation; "
        f"weighted shift: 2^-n {decaying}, 2^n {growing}, {len(subs['unit'])} returns to norm 1",
    )


def test_weighted_shift_rejects_leaving_the_space():
    with pytest.raises(DomainError):
        weighted_shift_orbit(WeightedShift(16), 16)


# -- 8 ---------------------------------------------------------------------------


def _cli(*argv) -> bytes:
    done = subprocess.run(
        [sys.executable, "-m", "orbit_verdict", *map(str, argv)], capture_output=True, check=True
    )
    return done.stdout


def test_criterion_8_cli_determinism(acceptance):
    commands = [
        ("classify-iterates", DATA / "mixed.json"),
        ("classify-averages", DATA / "mixed.json"),
        ("closed-form", DATA / "mixed.json", "--k", 9),
        ("fixed-point", DATA / "mixed.json"),
        ("oracle", DATA / "example3.json", "--max-k", 40),
        ("classify-iterates", DATA / "with_tail.json"),
        ("verify-identities", "--seed", 5),
        ("gallery", "example1"),
        ("gallery", "example3"),
    ]
    differing = [" ".join(map(str, argv[:1])) for argv in commands if _cli(*argv) != _cli(*argv)]
    record(
        acceptance,
        8,
        not differing,
        f"{len(commands)} commands run twice, {len(differing)} differ byte-wise"
        + (f": {differing}" if differing else ""),
    )
