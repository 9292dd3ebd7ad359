"""Exact Gaussian rationals, float fallbacks and polynomials in ``k``.

Two scalar modes are supported:

* exact: :class:`Scalar`, a complex number whose real and imaginary parts
  are arbitrary precision rationals.  Arithmetic never rounds.
* float: Python's built-in ``complex``.

Most of the package is written against plain arithmetic operators, so the
same code runs in both modes.  The helpers here (:func:`is_zero`,
:func:`abs2`, :func:`modulus`, :func:`unit_compare`) are the only places
where the two modes need to be told apart.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

__all__ = [
    "Scalar",
    "ScalarLike",
    "KPolynomial",
    "as_scalar",
    "is_exact",
    "is_zero",
    "abs2",
    "modulus",
    "unit_compare",
    "to_complex",
]


class Scalar:
    """Complex number ``(a + b i) / d`` with integers ``a, b`` and ``d > 0``.

    The representation is kept reduced (``gcd(a, b, d) == 1``), so equality
    is structural and hashing is consistent with ``int`` and ``Fraction``
    for real values.

    >>> z = Scalar("3/5", "4/5")
    >>> z * z.conjugate()
    Scalar('1')
    >>> (1 - Scalar(0, 1)) ** 2
    Scalar('0', '-2')
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re: Union[int, str, Rational] = 0, im: Union[int, str, Rational] = 0):
        fr, fi = Fraction(re), Fraction(im)
        d = math.lcm(fr.denominator, fi.denominator)
        self._a = fr.numerator * (d // fr.denominator)
        self._b = fi.numerator * (d // fi.denominator)
        self._d = d

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> "Scalar":
        if d < 0:
            a, b, d = -a, -b, -d
        g = math.gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    @classmethod
    def i(cls) -> "Scalar":
        return cls._make(0, 1, 1)

    # -- accessors ---------------------------------------------------------
    @property
    def real(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def imag(self) -> Fraction:
        return Fraction(self._b, self._d)

    def conjugate(self) -> "Scalar":
        return Scalar._make(self._a, -self._b, self._d)

    def abs2(self) -> Fraction:
        """Squared modulus, always an exact rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def is_real(self) -> bool:
        return self._b == 0

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _parts(other):
        if isinstance(other, Scalar):
            return other._a, other._b, other._d
        if isinstance(other, int):
            return other, 0, 1
        if isinstance(other, Rational):
            return other.numerator, 0, other.denominator
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, d = p
        if d == self._d:
            return Scalar._make(self._a + a, self._b + b, d)
        return Scalar._make(self._a * d + a * self._d, self._b * d + b * self._d, self._d * d)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._make(-self._a, -self._b, self._d)

    def __pos__(self) -> "Scalar":
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, d = p
        return Scalar._make(self._a * d - a * self._d, self._b * d - b * self._d, self._d * d)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, d = p
        return Scalar._make(a * self._d - self._a * d, b * self._d - self._b * d, self._d * d)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, d = p
        sa, sb = self._a, self._b
        if b == 0:
            return Scalar._make(sa * a, sb * a, self._d * d)
        if sb == 0:
            return Scalar._make(sa * a, sa * b, self._d * d)
        return Scalar._make(sa * a - sb * b, sa * b + sb * a, self._d * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, d = p
        n2 = a * a + b * b
        if n2 == 0:
            raise ZeroDivisionError("division by zero Scalar")
        # (sa + sb i)/sd * d (a - b i) / (a^2 + b^2)
        sa, sb = self._a, self._b
        return Scalar._make((sa * a + sb * b) * d, (sb * a - sa * b) * d, self._d * n2)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return Scalar._make(*p) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self:
                raise ZeroDivisionError("zero Scalar raised to a negative power")
            return (1 / self) ** (-n)
        # Gaussian-integer power of the numerator, one reduction at the end
        ra, rb = 1, 0
        ba, bb = self._a, self._b
        e = n
        while e:
            if e & 1:
                ra, rb = ra * ba - rb * bb, ra * bb + rb * ba
            e >>= 1
            if e:
                ba, bb = ba * ba - bb * bb, 2 * ba * bb
        return Scalar._make(ra, rb, self._d ** n)

    # -- comparisons and conversions ---------------------------------------
    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        a, b, d = p
        return self._a * d == a * self._d and self._b * d == b * self._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    def __float__(self) -> float:
        if self._b:
            raise TypeError("cannot convert a non-real Scalar to float")
        return self._a / self._d

    def __repr__(self) -> str:
        re = str(self.real)
        if self._b == 0:
            return f"Scalar({re!r})"
        return f"Scalar({re!r}, {str(self.imag)!r})"

    def __str__(self) -> str:
        re, im = self.real, self.imag
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{abs(im)}i"

    def __reduce__(self):
        return (Scalar, (str(self.real), str(self.imag)))


ScalarLike = Union[Scalar, int, Fraction, complex, float]


def as_scalar(value, mode: str = "exact") -> ScalarLike:
    """Convert ``value`` to the scalar type used by ``mode``.

    Exact mode accepts ints, Fractions, rational strings and ``Scalar``;
    floats are rejected because they would smuggle rounding into exact
    predicates.
    """
    if mode == "float":
        return complex(value)
    if mode != "exact":
        raise ValueError(f"unknown scalar mode {mode!r}")
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Rational, str)):
        return Scalar(value)
    if isinstance(value, complex):
        raise TypeError("complex floats cannot be converted to exact scalars")
    if isinstance(value, float):
        raise TypeError("floats cannot be converted to exact scalars")
    raise TypeError(f"cannot convert {type(value).__name__} to Scalar")


def is_exact(z) -> bool:
    return isinstance(z, (Scalar, int, Rational))


def to_complex(z) -> complex:
    return complex(z)


def is_zero(z, tol: float = 0.0) -> bool:
    """Exact zero test for exact scalars; ``|z| <= tol`` for floats."""
    if is_exact(z):
        return z == 0
    return abs(z) <= tol


def abs2(z):
    """Squared modulus; an exact ``Fraction`` for exact inputs."""
    if isinstance(z, Scalar):
        return z.abs2()
    if isinstance(z, (int, Rational)):
        return Fraction(z) ** 2
    return abs(z) ** 2


def modulus(z):
    """``|z|`` as a Fraction when it is rational, otherwise as a float.

    >>> modulus(Scalar(3, 4))
    Fraction(5, 1)
    >>> round(modulus(Scalar(1, 1)), 12)
    1.414213562373
    """
    if isinstance(z, (Scalar, int, Rational)):
        q = abs2(z)
        rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return Fraction(rn, rd)
        return math.sqrt(q)
    return abs(z)


def unit_compare(z, tol: float = 0.0) -> int:
    """Sign of ``|z| - 1``: -1 inside the unit circle, 0 on it, 1 outside.

    Exact scalars compare ``|z|^2`` with 1 as rationals, so no square root
    is taken.  Floats treat ``||z|^2 - 1| <= tol`` as on the circle.
    """
    q = abs2(z)
    if is_exact(z):
        return (q > 1) - (q < 1)
    if abs(q - 1) <= tol:
        return 0
    return 1 if q > 1 else -1


# -- polynomials in the discrete variable k ---------------------------------


def _strip(coeffs: Sequence) -> tuple:
    n = len(coeffs)
    while n and is_exact(coeffs[n - 1]) and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class KPolynomial:
    """Polynomial in ``k`` stored in the monomial basis.

    ``coeffs[p]`` multiplies ``k**p``.  Trailing exact zeros are dropped, so
    the zero polynomial has no coefficients and degree ``-inf``.

    >>> k = KPolynomial.variable()
    >>> p = (k - 1) * k
    >>> p.coeffs, p.degree, p(5)
    ((0, -1, 1), 2, 20)
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip(list(coeffs))

    @classmethod
    def variable(cls) -> "KPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "KPolynomial":
        return cls((c,))

    @classmethod
    def falling(cls, j: int, shift: int = 0) -> "KPolynomial":
        """``C(k + shift, j)`` expanded as ``(k+shift)...(k+shift-j+1) / j!``.

        Zero for ``j < 0``.
        """
        if j < 0:
            return cls()
        p = cls((1,))
        for m in range(j):
            p = p * cls((shift - m, 1))
        return p.scale(Fraction(1, math.factorial(j)))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def degree_within(self, tol: float = 0.0):
        """Degree ignoring trailing coefficients that are zero to ``tol``."""
        n = len(self.coeffs)
        while n and is_zero(self.coeffs[n - 1], tol):
            n -= 1
        return n - 1 if n else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, p: int):
        return self.coeffs[p] if 0 <= p < len(self.coeffs) else 0

    def __call__(self, k):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    def scale(self, c) -> "KPolynomial":
        return KPolynomial(a * c for a in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, KPolynomial):
            other = KPolynomial.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for p, c in enumerate(b):
            out[p] = out[p] + c
        return KPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return KPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, KPolynomial):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return KPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for p, a in enumerate(self.coeffs):
            for q, b in enumerate(other.coeffs):
                out[p + q] = out[p + q] + a * b
        return KPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, KPolynomial):
            other = KPolynomial.constant(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"KPolynomial({list(self.coeffs)!r})"
