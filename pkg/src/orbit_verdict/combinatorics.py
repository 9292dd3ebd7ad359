"""Binomial sums and the identities the closed forms depend on.

Every closed form in this module has a direct-summation twin.  In exact
mode the closed form is checked against the direct sum on every call
(``check=True``) and a disagreement raises :class:`IdentityViolation`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Callable, Sequence

from .errors import DomainError, IdentityViolation
from .scalar import KPolynomial, Scalar, is_exact

__all__ = [
    "binom",
    "s_sum",
    "s_sum_direct",
    "t_sum",
    "t_sum_direct",
    "d_factor",
    "binom_d_polynomial",
    "binom_product_identity",
    "shifted_binom_identity",
    "derivative_identity",
    "tj_recurrence_check",
    "newton_coeffs",
    "newton_eval",
    "newton_vanishing_sum",
    "p_coeff",
    "p_coeff_recursive",
    "m_poly",
    "l_coeff",
    "m_cancellation_check",
    "elementary_symmetric",
    "complete_homogeneous",
    "rs_identity_check",
]

# Below this distance from 1, float-mode sums skip the (1 - lam) closed forms.
NEAR_ONE = 1e-6


def _lift(lam):
    """Promote ints, Fractions and rational strings to exact scalars."""
    if isinstance(lam, (int, Rational, str)) and not isinstance(lam, bool):
        return Scalar(lam)
    return lam


def _is_one(lam) -> bool:
    return lam == 1


def binom(k, j: int):
    """Binomial coefficient with the conventions ``C(k, j) = 0`` for ``k < j``
    and for ``j < 0``.

    ``k`` may be a concrete integer or a :class:`KPolynomial` (typically
    ``KPolynomial.variable()``), in which case the falling factorial
    ``k (k-1) ... (k-j+1) / j!`` is returned expanded in the monomial basis.

    >>> binom(5, 2), binom(3, 5), binom(4, -1)
    (10, 0, 0)
    >>> binom(KPolynomial.variable(), 2).coeffs
    (Fraction(0, 1), Fraction(-1, 2), Fraction(1, 2))
    """
    if isinstance(k, KPolynomial):
        if j < 0:
            return KPolynomial()
        p = KPolynomial((1,))
        for m in range(j):
            p = p * (k - m)
        return p.scale(Fraction(1, math.factorial(j)))
    if j < 0 or k < j:
        return 0
    return math.comb(k, j)


# -- S(j, k) ----------------------------------------------------------------


def s_sum_direct(j: int, k: int, lam):
    lam = _lift(lam)
    total = 0
    power = lam**0
    for i in range(j, k):
        total = total + binom(i, j) * power
        power = power * lam
    return total


def s_sum(j: int, k: int, lam, check: bool = True):
    """``S(j, k) = sum_{i=j}^{k-1} C(i, j) lam^(i-j)`` via its closed form.

    For ``lam == 1`` this is ``C(k, j+1)``; otherwise the alternating
    closed form in powers of ``1 / (1 - lam)`` is used.
    """
    if not 0 <= j < k:
        raise DomainError(f"s_sum needs 0 <= j < k, got j={j}, k={k}")
    lam = _lift(lam)
    exact = is_exact(lam)
    if _is_one(lam):
        closed = binom(k, j + 1)
    elif not exact and abs(1 - lam) < NEAR_ONE:
        return s_sum_direct(j, k, lam)
    else:
        u = 1 - lam
        closed = (1 - lam**k) / u ** (j + 1)
        for i in range(j):
            closed = closed - binom(k, i + 1) * lam ** (k - i - 1) / u ** (j - i)
    if exact and check:
        direct = s_sum_direct(j, k, lam)
        if closed != direct:
            raise IdentityViolation(f"S({j},{k}) closed form {closed} != direct sum {direct}")
    return closed


# -- T_j and D(k, j, lam) ---------------------------------------------------


def t_sum_direct(j: int, k: int, lam):
    lam = _lift(lam)
    total = 0
    power = lam**0
    for i in range(j, k - 1):
        total = total + (k - i - 1) * binom(i, j) * power
        power = power * lam
    return total


def d_factor(k: int, j: int, lam):
    """Correction factor ``D(k, j, lam)``; tends to 1 as ``k`` grows."""
    if j < 0 or k < j + 2:
        raise DomainError(f"d_factor needs k >= j + 2, got k={k}, j={j}")
    lam = _lift(lam)
    if _is_one(lam):
        raise DomainError("d_factor is undefined at lam = 1")
    ck_j2 = binom(k - j, 2)
    bracket = 0
    for i in range(j + 1):
        b_i = (-1) ** (j - i) * binom(j, i) * Fraction(ck_j2, binom(k - i, 2))
        bracket = bracket + b_i * lam ** (j - i)
    return bracket / (1 - lam) ** j


def t_sum(j: int, k: int, lam, check: bool = True):
    """``T_j = sum_{i=j}^{k-2} (k-i-1) C(i, j) lam^(i-j)`` in closed form.

    Raises :class:`DomainError` for ``lam == 1``; that case is
    ``C(k, j+2)`` and is handled by the averages module.
    """
    if j < 0 or k < j + 2:
        raise DomainError(f"t_sum needs k >= j + 2, got k={k}, j={j}")
    lam = _lift(lam)
    if _is_one(lam):
        raise DomainError("t_sum closed form excludes lam = 1; use C(k, j+2)")
    exact = is_exact(lam)
    if not exact and abs(1 - lam) < NEAR_ONE:
        return t_sum_direct(j, k, lam)
    u = 1 - lam
    closed = (
        k / u ** (j + 1)
        - (j + 1) / u ** (j + 2)
        + binom(k, j) * lam ** (k - j) * d_factor(k, j, lam) / u**2
    )
    if exact and check:
        direct = t_sum_direct(j, k, lam)
        if closed != direct:
            raise IdentityViolation(f"T_{j}(k={k}) closed form {closed} != direct sum {direct}")
    return closed


def binom_d_polynomial(j: int, lam) -> KPolynomial:
    """``C(k, j) * D(k, j, lam)`` as an exact polynomial in ``k``.

    Each term ``C(k,j) C(j,i) C(k-j,2) / C(k-i,2)`` is rewritten as
    ``C(k,i) C(k-i-2, j-i)`` (see :func:`binom_product_identity`), which is a
    product of falling factorials in ``k``.
    """
    lam = _lift(lam)
    if _is_one(lam):
        raise DomainError("D(k, j, lam) is undefined at lam = 1")
    poly = KPolynomial()
    for i in range(j + 1):
        term = KPolynomial.falling(i) * KPolynomial.falling(j - i, shift=-i - 2)
        poly = poly + term.scale((-1) ** (j - i) * lam ** (j - i))
    poly = poly.scale(1 / (1 - lam) ** j)
    # guard the rewrite at the smallest admissible k
    k0 = j + 2
    expected = binom(k0, j) * d_factor(k0, j, lam)
    if is_exact(lam) and poly(k0) != expected:
        raise IdentityViolation(f"C(k,{j})D(k,{j},lam) polynomial disagrees at k={k0}")
    return poly


# -- binomial identities ------------------------------------------------------


def binom_product_identity(k: int, i: int, j: int) -> bool:
    """``C(k,j) C(j,i) C(k-j,2) / C(k-i,2) == C(k,i) C(k-i-2, j-i)``."""
    if not (0 <= i <= j and k >= j + 2):
        raise ValueError(f"need 0 <= i <= j and k >= j + 2, got k={k}, i={i}, j={j}")
    lhs = Fraction(binom(k, j) * binom(j, i) * binom(k - j, 2), binom(k - i, 2))
    rhs = binom(k, i) * binom(k - i - 2, j - i)
    return lhs == rhs


def shifted_binom_identity(k: int, i: int, j: int) -> bool:
    """Coefficient identity behind the ``T_j -> T_{j+1}`` induction step:

    ``(k-i+1) C(k,i-1) C(k-i-1,j-i+1) + (k-i-j-2) C(k,i) C(k-i-2,j-i)
    == (j+1) C(k,i) C(k-i-2,j-i+1)`` for ``k >= i + 2`` and ``j >= i - 1``.
    """
    if k < i + 2 or j < i - 1:
        raise ValueError(f"need k >= i + 2 and j >= i - 1, got k={k}, i={i}, j={j}")
    lhs = (k - i + 1) * binom(k, i - 1) * binom(k - i - 1, j - i + 1) + (k - i - j - 2) * binom(
        k, i
    ) * binom(k - i - 2, j - i)
    rhs = (j + 1) * binom(k, i) * binom(k - i - 2, j - i + 1)
    return lhs == rhs


def _a_poly(k: int, j: int) -> KPolynomial:
    # sum_i (-1)^(j-i) C(k,i) C(k-i-2,j-i) lam^(j-i), as a polynomial in lam
    return KPolynomial(
        (-1) ** p * binom(k, j - p) * binom(k - j + p - 2, p) for p in range(j + 1)
    )


def _derivative(p: KPolynomial) -> KPolynomial:
    return KPolynomial(q * c for q, c in enumerate(p.coeffs) if q > 0)


def derivative_identity(k: int, j: int) -> bool:
    """``[(1-lam)(k-j) + (j+2) lam] A + (1-lam) lam A' == (j+1) A_next``,
    compared as exact polynomials in ``lam``."""
    a = _a_poly(k, j)
    one_minus = KPolynomial((1, -1))
    lam = KPolynomial((0, 1))
    lhs = (one_minus * (k - j) + lam * (j + 2)) * a + one_minus * lam * _derivative(a)
    rhs = _a_poly(k, j + 1).scale(j + 1)
    return lhs == rhs


def tj_recurrence_check(j: int, lam, k: int) -> bool:
    """Check ``T_{j+1} = (1/(j+1)) dT_j/dlam`` at one ``(j, lam, k)``.

    The derivative is taken symbolically: the closed form of ``T_j`` is the
    rational function ``P(lam) / (1-lam)^(j+2)`` with
    ``P = k(1-lam) - (j+1) + lam^(k-j) A(lam)``, and ``P`` is differentiated
    as a polynomial.  The result is compared with the directly summed
    ``T_{j+1}``.  The coefficient identity and the ``A``-derivative identity
    used by the induction are checked on the same ``(k, j)`` too.
    """
    if k < j + 3:
        raise ValueError(f"need k >= j + 3, got k={k}, j={j}")
    lam = _lift(lam)
    if lam == 0 or _is_one(lam):
        raise ValueError("lam must differ from 0 and 1")
    m = j + 2
    numer = (
        KPolynomial((k - (j + 1), -k))
        + KPolynomial([0] * (k - j) + [1]) * _a_poly(k, j)
    )
    one_minus = 1 - lam
    closed_tj = numer(lam) / one_minus**m
    if closed_tj != t_sum_direct(j, k, lam):
        return False
    d_numer = _derivative(numer)
    dt = (d_numer(lam) * one_minus + m * numer(lam)) / one_minus ** (m + 1)
    if dt / (j + 1) != t_sum_direct(j + 1, k, lam):
        return False
    if not all(shifted_binom_identity(k, i, j) for i in range(j + 2)):
        return False
    return derivative_identity(k, j)


# -- Newton forward differences ---------------------------------------------


def newton_coeffs(values: Sequence) -> list:
    """Coefficients ``d_i`` of ``f`` in the basis ``1, (x-1), (x-1)(x-2), ...``.

    ``values[p]`` is ``f(p + 1)``.

    >>> newton_coeffs([1, 4, 9])
    [Fraction(1, 1), Fraction(3, 1), Fraction(1, 1)]
    """
    if not values:
        raise ValueError("values must be nonempty")
    out = []
    for i in range(len(values)):
        acc = 0
        for p in range(i + 1):
            acc = acc + (-1) ** p * binom(i, p) * values[i - p]
        out.append(acc * Fraction(1, math.factorial(i)))
    return out


def newton_eval(d: Sequence, x):
    acc = 0
    basis = 1
    for i, c in enumerate(d):
        acc = acc + c * basis
        basis = basis * (x - (i + 1))
    return acc


def newton_vanishing_sum(f: Callable[[int], object], n: int):
    """``f(n+1) - C(n,1) f(n) + ... + (-1)^n f(1)``; zero when ``deg f < n``."""
    total = 0
    for p in range(n + 1):
        total = total + (-1) ** p * binom(n, p) * f(n + 1 - p)
    return total


# -- P(i,j,m), M(m,j,x), L(m,j,lam) ------------------------------------------


def p_coeff(i: int, j: int, m: int) -> Fraction:
    """Newton coefficient ``d_i`` of ``f(x) = (j - x)^(m-1)``.

    Zero for ``i < 0`` and for ``i >= m``; ``P(m-1, j, m) == (-1)^(m-1)``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if i < 0 or i >= m:
        return Fraction(0)
    acc = 0
    for p in range(i + 1):
        acc += (-1) ** p * binom(i, p) * (j - (i + 1 - p)) ** (m - 1)
    return Fraction(acc, math.factorial(i))


def p_coeff_recursive(i: int, j: int, m: int) -> Fraction:
    """Same as :func:`p_coeff`, through ``P(i,j,m) = (j-i-1) P(i,j,m-1) - P(i-1,j,m-1)``."""
    if i < 0 or i >= m:
        return Fraction(0)
    if m == 1:
        return Fraction(1)
    return (j - i - 1) * p_coeff_recursive(i, j, m - 1) - p_coeff_recursive(i - 1, j, m - 1)


def m_poly(m: int, j: int) -> KPolynomial:
    """``M(m, j, x) = sum_{i=1}^m (-1)^(i+1) (i+1)! P(i-1,j,m) C(j,i) x^i``
    as exact coefficients in ``x``."""
    coeffs = [0]
    for i in range(1, m + 1):
        coeffs.append((-1) ** (i + 1) * math.factorial(i + 1) * p_coeff(i - 1, j, m) * binom(j, i))
    return KPolynomial(coeffs)


def l_coeff(m: int, j: int, lam):
    """Coefficient of ``k^-m`` in the large-``k`` expansion of ``D(k,j,lam) - 1``."""
    lam = _lift(lam)
    if _is_one(lam):
        raise DomainError("l_coeff is undefined at lam = 1")
    return m_poly(m, j)(lam / (1 - lam))


def elementary_symmetric(values: Sequence, d: int):
    """``e_d(values)``; 1 for ``d == 0`` and 0 for ``d > len(values)``."""
    if d < 0:
        return 0
    e = [1] + [0] * d
    for v in values:
        for q in range(d, 0, -1):
            e[q] = e[q] + v * e[q - 1]
    return e[d]


def complete_homogeneous(values: Sequence, d: int):
    """``h_d(values)``, the sum of all degree-``d`` monomials."""
    if d < 0:
        return 0
    h = [1] + [0] * d
    for v in values:
        for q in range(1, d + 1):
            h[q] = h[q] + v * h[q - 1]
    return h[d]


def m_cancellation_check(m: int, j: int) -> bool:
    """``sum_i (-1)^i e_i(j-1..j-m+1) M(m-i, j, x) == (m+1) j(j-1)...(j-m+1) x^m``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    shifted = [j - i for i in range(1, m)]
    lhs = KPolynomial()
    for i in range(m):
        lhs = lhs + m_poly(m - i, j).scale((-1) ** i * elementary_symmetric(shifted, i))
    lead = (m + 1) * math.prod(j - i for i in range(m))
    return lhs == KPolynomial([0] * m + [lead])


def rs_identity_check(p: int, q: int, assignment: Sequence) -> bool:
    """``sum_{i=0}^q (-1)^i R(p+i, q-i) S(p+i-1, i) == 0`` at ``assignment``.

    ``R(n, d)`` is the complete homogeneous sum of degree ``d`` in the first
    ``n`` variables and ``S(n, d)`` the elementary symmetric sum.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    if len(assignment) < p + q:
        raise ValueError(f"need at least {p + q} values, got {len(assignment)}")
    total = 0
    for i in range(q + 1):
        r = complete_homogeneous(assignment[: p + i], q - i)
        s = elementary_symmetric(assignment[: p + i - 1], i)
        total = total + (-1) ** i * r * s
    return total == 0
