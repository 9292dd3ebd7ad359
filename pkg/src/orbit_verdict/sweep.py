"""Exhaustive and randomized checks of the binomial identities.

Each row of the sweep covers one identity over a grid and counts failures.
Rows are independent, so they are evaluated on a thread pool; the table is
always returned in a fixed order.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .combinatorics import (
    binom,
    binom_product_identity,
    derivative_identity,
    m_cancellation_check,
    newton_coeffs,
    newton_eval,
    newton_vanishing_sum,
    p_coeff,
    p_coeff_recursive,
    rs_identity_check,
    s_sum,
    s_sum_direct,
    shifted_binom_identity,
    t_sum,
    t_sum_direct,
    tj_recurrence_check,
)
from .sampling import LAMBDA_POOL
from .scalar import KPolynomial

__all__ = ["SweepRow", "SweepConfig", "identity_sweep", "thread_count"]

THREADS_ENV = "ORBIT_VERDICT_THREADS"


def thread_count(default: Optional[int] = None) -> int:
    """Worker cap from ``ORBIT_VERDICT_THREADS`` (an integer >= 1)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return default or min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer >= 1, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be an integer >= 1, got {n}")
    return n


@dataclass(frozen=True)
class SweepConfig:
    max_k: int = 30
    max_j: int = 10
    trials: int = 10
    seed: int = 0


@dataclass
class SweepRow:
    name: str
    grid: str
    cases: int = 0
    failures: int = 0
    first_failure: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, where: str) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = where


NONUNIT = tuple(lam for lam in LAMBDA_POOL if lam != 0 and lam != 1)


def _product(cfg: SweepConfig) -> SweepRow:
    row = SweepRow("binom_product", f"k<={cfg.max_k}, 0<=i<=j<={cfg.max_j}, k>=j+2")
    for j in range(cfg.max_j + 1):
        for k in range(j + 2, cfg.max_k + 1):
            for i in range(j + 1):
                row.record(binom_product_identity(k, i, j), f"k={k}, i={i}, j={j}")
    return row


def _shifted(cfg: SweepConfig) -> SweepRow:
    row = SweepRow("shifted_binom", f"k<={cfg.max_k}, j<={cfg.max_j}, i<=j+1, k>=i+2")
    for j in range(cfg.max_j + 1):
        for i in range(j + 2):
            for k in range(i + 2, cfg.max_k + 1):
                row.record(shifted_binom_identity(k, i, j), f"k={k}, i={i}, j={j}")
    return row


def _derivative(cfg: SweepConfig) -> SweepRow:
    row = SweepRow("derivative_identity", f"j<={cfg.max_j}, j+3<=k<={cfg.max_k}")
    for j in range(cfg.max_j + 1):
        for k in range(j + 3, cfg.max_k + 1):
            row.record(derivative_identity(k, j), f"k={k}, j={j}")
    return row


def _s_sums(cfg: SweepConfig) -> SweepRow:
    row = SweepRow("s_sum", f"lam in pool, 0<=j<k<={cfg.max_k}")
    for lam in LAMBDA_POOL:
        for k in range(1, cfg.max_k + 1):
            for j in range(min(k, cfg.max_j + 1)):
                ok = s_sum(j, k, lam, check=False) == s_sum_direct(j, k, lam)
                row.record(ok, f"lam={lam}, j={j}, k={k}")
    return row


def _t_sums(cfg: SweepConfig) -> SweepRow:
    jmax = min(cfg.max_j, 8)
    row = SweepRow("t_sum", f"lam in pool minus {{0,1}}, j<={jmax}, j+2<=k<={cfg.max_k}")
    for lam in NONUNIT:
        for j in range(jmax + 1):
            for k in range(j + 2, cfg.max_k + 1):
                ok = t_sum(j, k, lam, check=False) == t_sum_direct(j, k, lam)
                row.record(ok, f"lam={lam}, j={j}, k={k}")
    return row


def _tj_recurrence(cfg: SweepConfig) -> SweepRow:
    jmax, kmax = min(cfg.max_j, 4), min(cfg.max_k, 15)
    row = SweepRow("tj_recurrence", f"lam in pool minus {{0,1}}, j<={jmax}, j+3<=k<={kmax}")
    for lam in NONUNIT:
        for j in range(jmax + 1):
            for k in range(j + 3, kmax + 1):
                row.record(tj_recurrence_check(j, lam, k), f"lam={lam}, j={j}, k={k}")
    return row


def _symbolic_binom(cfg: SweepConfig) -> SweepRow:
    row = SweepRow("symbolic_binom", f"j<={cfg.max_j}, j<=k<=j+20")
    kv = KPolynomial.variable()
    for j in range(cfg.max_j + 1):
        poly = binom(kv, j)
        for k in range(j, j + 21):
            row.record(poly(k) == binom(k, j), f"j={j}, k={k}")
    return row


def _newton(cfg: SweepConfig) -> SweepRow:
    count = 5 * cfg.trials
    row = SweepRow("newton_round_trip", f"{count} random integer polynomials, degree<=6")
    rng = random.Random(cfg.seed)
    for t in range(count):
        deg = rng.randint(0, 6)
        coeffs = [rng.randint(-9, 9) for _ in range(deg + 1)]
        f = lambda x, c=coeffs: sum(a * x**p for p, a in enumerate(c))
        values = [f(x) for x in range(1, deg + 2)]
        d = newton_coeffs(values)
        ok = all(newton_eval(d, x) == f(x) for x in range(1, deg + 2 + 5))
        ok = ok and all(newton_vanishing_sum(f, n) == 0 for n in (deg + 1, deg + 2, deg + 3))
        row.record(ok, f"trial {t}: coefficients {coeffs}")
    return row


def _p_recursion(cfg: SweepConfig) -> SweepRow:
    row = SweepRow("p_recursion", f"1<=m<=5, -1<=i<=m, j<={cfg.max_j}")
    for m in range(1, 6):
        for j in range(cfg.max_j + 1):
            for i in range(-1, m + 1):
                row.record(p_coeff(i, j, m) == p_coeff_recursive(i, j, m), f"i={i}, j={j}, m={m}")
            row.record(p_coeff(m - 1, j, m) == (-1) ** (m - 1), f"top coefficient, j={j}, m={m}")
    return row


def _m_cancellation(cfg: SweepConfig) -> SweepRow:
    jmax = min(cfg.max_j, 8)
    row = SweepRow("m_cancellation", f"1<=m<=5, m<=j<={jmax}")
    for m in range(1, 6):
        for j in range(m, jmax + 1):
            row.record(m_cancellation_check(m, j), f"m={m}, j={j}")
    return row


def _rs(cfg: SweepConfig) -> SweepRow:
    row = SweepRow("rs_identity", f"1<=p,q<=5, {cfg.trials} random assignments each")
    rng = random.Random(cfg.seed + 1)
    for p in range(1, 6):
        for q in range(1, 6):
            for t in range(cfg.trials):
                values = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(p + q)]
                row.record(rs_identity_check(p, q, values), f"p={p}, q={q}, trial {t}")
    return row


ROWS: tuple = (
    _product,
    _shifted,
    _derivative,
    _s_sums,
    _t_sums,
    _tj_recurrence,
    _symbolic_binom,
    _newton,
    _p_recursion,
    _m_cancellation,
    _rs,
)


def identity_sweep(cfg: SweepConfig = SweepConfig(), threads: Optional[int] = None) -> list:
    """Run every identity row; the result order is fixed."""
    threads = threads or thread_count()
    if threads == 1:
        return [fn(cfg) for fn in ROWS]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda fn: fn(cfg), ROWS))
