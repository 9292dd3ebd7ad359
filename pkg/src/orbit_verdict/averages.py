"""Closed forms for the averages ``Ave_k = (x + Tx + ... + T^(k-1) x) / k``.

On a block with eigenvalue ``lam != 1``:

    Ave_k = E + F/k + (lam^k / k) H(k)

where ``E`` is the block's fixed point and ``H`` is a polynomial in ``k``
with vector coefficients.  The degree of ``H`` decides whether the averages
stay bounded, and ``H == 0`` exactly when ``x`` is the fixed point.

On a block with ``lam == 1`` the average is itself a polynomial in ``k``:
``k Ave_k = sum_{j<s} C(k, j+1) N^j v + sum_{j<t} C(k, j+2) N^j d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .combinatorics import binom, binom_d_polynomial, d_factor
from .errors import DomainError
from .iterates import CASE_LABELS, float_orbit_states, float_tolerance
from .jordan import (
    BlockVector,
    JordanBlock,
    JordanSystem,
    apply_affine,
    block_norm,
    nilpotent_index,
    seg_add,
    seg_is_zero,
    seg_scale,
    seg_sub,
    shift,
)
from .scalar import KPolynomial, is_zero, unit_compare
from .verdict import BlockVerdict, Kind, Verdict, assemble, empirical_class, input_scale

__all__ = [
    "AverageExpansion",
    "HPolynomial",
    "AverageTrace",
    "expand_average_block",
    "expand_average_system",
    "eval_average",
    "eval_average_system",
    "eval_average_factored",
    "h_polynomial",
    "unit_average_polynomial",
    "classify_average_block",
    "classify_average_system",
    "fixed_point_condition",
    "block_fixed_point",
    "fixed_point",
    "brute_force_average",
]


@dataclass(frozen=True)
class AverageExpansion:
    """Constant data of the average closed form for one block.

    For ``lam != 1``: ``E``, ``F``, the x-side coefficients ``Aavg`` (length
    ``s``) and ``ncs[j] = N^j d`` (length ``t``).  For ``lam == 1``: the
    vectors ``unit_x[j] = N^j v`` multiplying ``C(k, j+1)`` and
    ``unit_c[j] = N^j d`` multiplying ``C(k, j+2)``.
    """

    lam: object
    size: int
    s: int
    t: int
    E: tuple = ()
    F: tuple = ()
    Aavg: tuple = ()
    ncs: tuple = ()
    unit_x: tuple = ()
    unit_c: tuple = ()

    @property
    def is_unit(self) -> bool:
        return self.lam == 1

    @property
    def w(self) -> int:
        return max(self.s, self.t)

    @property
    def min_k(self) -> int:
        """Smallest ``k`` at which :func:`eval_average` applies."""
        return 1 if self.is_unit else self.w + 1


def _inverse_powers(lam, count: int) -> list:
    u = 1 - lam
    inv = [u**0]
    for _ in range(count):
        inv.append(inv[-1] / u)
    return inv


def expand_average_block(block: JordanBlock, v, d, tol: float = 0.0) -> AverageExpansion:
    v, d = tuple(v), tuple(d)
    n = block.size
    s, t = nilpotent_index(v, tol), nilpotent_index(d, tol)
    lam = block.lam
    if lam == 1:
        return AverageExpansion(
            lam,
            n,
            s,
            t,
            unit_x=tuple(shift(v, j) for j in range(s)),
            unit_c=tuple(shift(d, j) for j in range(t)),
        )
    inv = _inverse_powers(lam, max(s, t) + 2)
    zero = (0,) * n
    E, F = zero, zero
    ncs = tuple(shift(d, j) for j in range(t))
    for j, nc in enumerate(ncs):
        E = seg_add(E, seg_scale(nc, inv[j + 1]))
        F = seg_sub(F, seg_scale(nc, (j + 1) * inv[j + 2]))
    aavg = []
    for j in range(s):
        F = seg_add(F, seg_scale(shift(v, j), inv[j + 1]))
        a = zero
        for i in range(j, s):
            a = seg_sub(a, seg_scale(shift(v, i), inv[i - j + 1]))
        aavg.append(a)
    return AverageExpansion(lam, n, s, t, E, F, tuple(aavg), ncs)


def expand_average_system(sys: JordanSystem, tol: float = 0.0) -> list:
    return [
        expand_average_block(b, v, d, tol)
        for b, v, d in zip(sys.blocks, sys.x.segments, sys.c.segments)
    ]


def eval_average(exp: AverageExpansion, k: int) -> tuple:
    """Block segment of ``Ave_k``; needs ``k > max(s, t)`` (any ``k >= 1``
    when ``lam == 1``)."""
    if k < exp.min_k:
        raise DomainError(f"average closed form holds for k >= {exp.min_k}, got k={k}")
    zero = (0,) * exp.size
    if exp.is_unit:
        total = zero
        for j, nv in enumerate(exp.unit_x):
            total = seg_add(total, seg_scale(nv, binom(k, j + 1)))
        for j, nc in enumerate(exp.unit_c):
            total = seg_add(total, seg_scale(nc, binom(k, j + 2)))
        return seg_scale(total, Fraction(1, k))
    lam = exp.lam
    u2 = (1 - lam) ** 2
    g = zero
    for j in range(exp.w):
        part = exp.Aavg[j] if j < exp.s else zero
        if j < exp.t:
            part = seg_add(part, seg_scale(exp.ncs[j], d_factor(k, j, lam) / u2))
        g = seg_add(g, seg_scale(part, binom(k, j) * lam ** (k - j)))
    return seg_add(exp.E, seg_scale(seg_add(exp.F, g), Fraction(1, k)))


def eval_average_system(expansions, k: int) -> BlockVector:
    return BlockVector(tuple(eval_average(e, k) for e in expansions))


# -- the polynomial H ---------------------------------------------------------


@dataclass(frozen=True)
class HPolynomial:
    """Polynomial in ``k`` with block-segment coefficients, stored as one
    :class:`KPolynomial` per coordinate.

    ``rule`` names what decides the degree: ``"s=t"`` when the x- and
    c-chains have equal length (the degree then depends on cancellation),
    otherwise the dominant coefficient (``"A_{s-1}"`` or ``"N^{t-1}c"``),
    which is never zero and fixes the degree at ``max(s, t) - 1``.
    """

    coords: tuple
    rule: str

    @property
    def degree(self):
        return max((p.degree for p in self.coords), default=-math.inf)

    def degree_within(self, tol: float = 0.0):
        return max((p.degree_within(tol) for p in self.coords), default=-math.inf)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coords)

    def coefficient(self, p: int) -> tuple:
        return tuple(c.coefficient(p) for c in self.coords)

    @property
    def leading(self) -> Optional[tuple]:
        deg = self.degree
        return None if deg < 0 else self.coefficient(deg)

    def __call__(self, k) -> tuple:
        return tuple(p(k) for p in self.coords)


def _vector_poly(n: int, terms) -> tuple:
    """Sum of ``scalar_poly * segment`` terms as per-coordinate polynomials."""
    coords = [KPolynomial() for _ in range(n)]
    for poly, seg in terms:
        for q in range(n):
            if not is_zero(seg[q]):
                coords[q] = coords[q] + poly.scale(seg[q])
    return tuple(coords)


def h_polynomial(exp: AverageExpansion) -> HPolynomial:
    """``H(k) = sum_j C(k,j) lam^(-j) (Aavg_j + D(k,j,lam) N^j d / (1-lam)^2)``
    built exactly in ``k``."""
    lam = exp.lam
    if lam == 0 or lam == 1:
        raise DomainError("H(k) is defined only for lam not in {0, 1}")
    kv = KPolynomial.variable()
    u2 = (1 - lam) ** 2
    terms = []
    for j in range(exp.w):
        weight = lam ** (-j) if j else 1
        if j < exp.s:
            terms.append((binom(kv, j).scale(weight), exp.Aavg[j]))
        if j < exp.t:
            terms.append((binom_d_polynomial(j, lam).scale(weight / u2), exp.ncs[j]))
    if exp.s == exp.t:
        rule = "s=t"
    elif exp.s > exp.t:
        rule = "A_{s-1}"
    else:
        rule = "N^{t-1}c"
    return HPolynomial(_vector_poly(exp.size, terms), rule)


def eval_average_factored(exp: AverageExpansion, k: int) -> tuple:
    """``E + (F + lam^k H(k)) / k`` for any ``k >= 1`` and ``lam not in {0, 1}``.

    The polynomial form of ``C(k,j) D(k,j,lam)`` extends the closed form
    below ``k = max(s, t) + 1``, where :func:`eval_average` refuses.
    """
    if k < 1:
        raise DomainError(f"averages start at k = 1, got k={k}")
    hk = h_polynomial(exp)(k)
    scale = exp.lam**k
    return tuple(e + (f + scale * h) * Fraction(1, k) for e, f, h in zip(exp.E, exp.F, hk))


def unit_average_polynomial(exp: AverageExpansion) -> tuple:
    """For ``lam == 1``: per-coordinate polynomials ``Q`` with ``Ave_k = Q(k)``.

    ``C(k, m) / k = C(k-1, m-1) / m`` is a polynomial, so the division by
    ``k`` is exact.
    """
    if not exp.is_unit:
        raise DomainError("unit_average_polynomial needs lam == 1")
    km1 = KPolynomial((-1, 1))
    terms = [(binom(km1, j).scale(Fraction(1, j + 1)), nv) for j, nv in enumerate(exp.unit_x)]
    terms += [(binom(km1, j + 1).scale(Fraction(1, j + 2)), nc) for j, nc in enumerate(exp.unit_c)]
    return _vector_poly(exp.size, terms)


# -- classification -----------------------------------------------------------


def classify_average_block(exp: AverageExpansion, tol: float = 0.0) -> BlockVerdict:
    if exp.is_unit:
        case = CASE_LABELS[3]
        polys = unit_average_polynomial(exp)
        deg = max((p.degree_within(tol) for p in polys), default=-math.inf)
        if deg >= 1:
            return BlockVerdict(Kind.DIVERGES, case, f"average grows like k^{deg}")
        limit = tuple(p.coefficient(0) for p in polys)
        return BlockVerdict.converging(limit, case, tol, "average is constant")
    if exp.lam == 0 or (tol and is_zero(exp.lam, tol)):
        return BlockVerdict.converging(exp.E, CASE_LABELS[4], tol, "converges to E")
    where = unit_compare(exp.lam, tol)
    if where < 0:
        return BlockVerdict.converging(exp.E, CASE_LABELS[4], tol, "converges to E")
    h = h_polynomial(exp)
    deg = h.degree_within(tol)
    if where > 0:
        case = CASE_LABELS[1]
        if deg >= 0:
            return BlockVerdict(Kind.DIVERGES, case, f"H != 0 (degree {deg}, rule {h.rule})")
        return BlockVerdict.converging(exp.E, case, tol, "H == 0, average is E")
    case = CASE_LABELS[2]
    if deg >= 2:
        return BlockVerdict(Kind.DIVERGES, case, f"deg H = {deg} >= 2 (rule {h.rule})")
    if deg == 1:
        return BlockVerdict(Kind.BOUNDED, case, "deg H = 1: lam^k times a nonzero vector")
    return BlockVerdict.converging(exp.E, case, tol, f"deg H = {deg}: converges to E")


def classify_average_system(sys: JordanSystem, horizon: Optional[int] = None) -> Verdict:
    """Dichotomy for the averages, refined to the trichotomy when ``c = 0``.

    With ``horizon`` and a BOUNDED_AWAY verdict, empirical bounds are read
    from the window ``[K/2, K]`` of the float averages.
    """
    tol = float_tolerance(sys)
    subs = [classify_average_block(e, tol) for e in expand_average_system(sys, tol)]
    verdict = assemble(subs, linear=sys.c.is_zero(tol), tol=tol, uncertain=tol > 0)
    if horizon and verdict.kind is Kind.BOUNDED_AWAY:
        trace = brute_force_average(sys, horizon, mode="float")
        window = np.asarray(trace.norms[horizon // 2 :], dtype=float)
        verdict = replace(verdict, bounds=(float(window.min()), float(window.max())))
    return verdict


# -- fixed points -------------------------------------------------------------


def fixed_point_condition(block: JordanBlock, v, d, i: int) -> bool:
    """``N^i v == sum_{j=i}^{t-1} N^j d / (1-lam)^(j-i+1)``.

    At ``i = 0`` this says ``v`` is the fixed point; for ``i >= t`` the sum is
    empty and the condition reads ``N^i v = 0``.  The degree of ``H`` is at
    most ``i - 1`` exactly when the condition holds at ``i``.
    """
    lam = block.lam
    if lam == 0 or lam == 1:
        raise DomainError("the fixed-point conditions need lam not in {0, 1}")
    if not 0 <= i < block.size:
        raise DomainError(f"index i must lie in [0, {block.size - 1}], got {i}")
    v, d = tuple(v), tuple(d)
    t = nilpotent_index(d)
    inv = _inverse_powers(lam, max(t - i, 0) + 1)
    rhs = (0,) * block.size
    for j in range(i, t):
        rhs = seg_add(rhs, seg_scale(shift(d, j), inv[j - i + 1]))
    return seg_is_zero(seg_sub(shift(v, i), rhs))


def block_fixed_point(block: JordanBlock, d) -> tuple:
    """A solution of ``(lam + N) v + d = v`` on one block."""
    d = tuple(d)
    n = block.size
    if block.lam != 1:
        inv = _inverse_powers(block.lam, n + 1)
        out = (0,) * n
        for j in range(nilpotent_index(d)):
            out = seg_add(out, seg_scale(shift(d, j), inv[j + 1]))
        return out
    # N v = -d is solvable iff the last coordinate of d vanishes
    if not is_zero(d[-1]):
        raise DomainError("a lam = 1 block whose c-part reaches the chain top has no fixed point")
    return (0,) + tuple(-z for z in d[:-1])


def fixed_point(sys: JordanSystem) -> BlockVector:
    """A point with ``T x = x``; unique when no block has ``lam == 1``."""
    return BlockVector(
        tuple(block_fixed_point(b, d) for b, d in zip(sys.blocks, sys.c.segments))
    )


# -- oracle -------------------------------------------------------------------


@dataclass
class AverageTrace:
    """``averages[k-1] = Ave_k`` for ``k = 1..K`` and their block norms."""

    averages: object
    norms: object
    empirical: str
    scale: float
    overflow_step: Optional[int] = None


def brute_force_average(sys: JordanSystem, K: int, mode: Optional[str] = None) -> AverageTrace:
    """Running-sum averages straight from the definition; exact in exact mode."""
    if K < 1:
        raise DomainError("horizon K must be >= 1")
    mode = mode or sys.mode
    scale = input_scale(sys)
    if mode == "exact":
        state, total = sys.x, BlockVector.zeros(sys.sizes)
        averages = []
        for k in range(1, K + 1):
            total = total + state
            averages.append(total.scale(Fraction(1, k)))
            state = apply_affine(sys, state)
        norms = [block_norm(a) for a in averages]
        return AverageTrace(
            averages, norms, empirical_class(np.array(norms, dtype=float), scale), scale
        )
    states, overflow = float_orbit_states(sys, K - 1)
    with np.errstate(all="ignore"):
        sums = np.cumsum(states, axis=0)
        averages = sums / np.arange(1, sums.shape[0] + 1)[:, None]
    finite = np.isfinite(averages).all(axis=1)
    if not finite.all():
        cut = int(np.argmin(finite))
        averages = averages[:cut]
        overflow = cut + 1 if overflow is None else min(overflow, cut + 1)
    mags = np.abs(averages)
    norms = np.maximum.reduceat(mags, sys.segment_starts(), axis=1).sum(axis=1)
    return AverageTrace(averages, norms, empirical_class(norms, scale, overflow), scale, overflow)
