"""Operators split into a finite Jordan head and a contracting tail.

The tail lives on a truncated sequence space.  Its operator ``A2`` satisfies
``||A2^k y|| <= r^k ||y||`` for ``k >= N`` with ``r < 1``, which is enough to
keep the tail part of every orbit bounded; the head then decides the
verdict.  A weighted shift whose weights alternate between long runs of 1/2
and 2 shows what goes wrong without such a splitting: its orbit norms are
unbounded yet return to small values infinitely often.

Tail and sequence norms are sup norms.  The norm of a full state is
``block_norm(head part) + ||tail part||``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, ShapeError
from .iterates import classify_system, float_orbit_states, float_tolerance
from .jordan import JordanSystem, segment_norm
from .scalar import is_zero, modulus
from .verdict import Kind, Verdict, assemble, empirical_class, input_scale

__all__ = [
    "Tail",
    "PropertyPOperator",
    "apply_tail",
    "tail_power_norm",
    "check_contraction",
    "tail_orbit",
    "tail_bound",
    "classify_property_p",
    "simulate_norms",
    "WeightedShift",
    "weighted_shift_orbit",
    "example1_subsequences",
    "triangular",
]

DEFAULT_TRUNCATION = 512


@dataclass(frozen=True)
class Tail:
    """Contracting tail operator on ``truncation`` coordinates.

    ``kind="diagonal"`` acts as ``e_i -> w_i e_i``; ``kind="shift"`` acts as
    ``e_i -> w_i e_{i+1}``.  ``r`` and ``N`` are the claimed contraction
    data; :func:`check_contraction` verifies them.
    """

    kind: str
    weights: tuple
    r: Fraction
    N: int = 1

    def __post_init__(self):
        if self.kind not in ("diagonal", "shift"):
            raise ValueError(f"tail kind must be 'diagonal' or 'shift', got {self.kind!r}")
        if not 0 <= self.r < 1:
            raise DomainError(f"contraction rate r must lie in [0, 1), got {self.r}")
        if self.N < 1:
            raise DomainError(f"N must be >= 1, got {self.N}")
        object.__setattr__(self, "weights", tuple(self.weights))

    @property
    def truncation(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, kind: str, r, truncation: int = DEFAULT_TRUNCATION) -> "Tail":
        r = Fraction(r)
        return cls(kind, (r,) * truncation, r, 1)


def _sup(y: Sequence):
    return segment_norm(tuple(y)) if len(y) else Fraction(0)


def apply_tail(tail: Tail, y: Sequence) -> tuple:
    """``A2 y``; a nonzero coordinate pushed past the truncation is an error."""
    if len(y) != tail.truncation:
        raise ShapeError(f"tail vector has length {len(y)}, truncation is {tail.truncation}")
    w = tail.weights
    if tail.kind == "diagonal":
        return tuple(a * b for a, b in zip(w, y))
    if not is_zero(y[-1] * w[-1]):
        raise DomainError("orbit left the truncated space; raise the truncation")
    return (0,) + tuple(w[i] * y[i] for i in range(len(y) - 1))


def tail_power_norm(tail: Tail, k: int):
    """Sup-norm operator norm of ``A2^k`` on the truncated space.

    For a shift this is the largest product of ``k`` consecutive weights
    whose window stays inside the truncation.
    """
    mags = [modulus(w) for w in tail.weights]
    if k == 0:
        return Fraction(1)
    if tail.kind == "diagonal":
        return max(m**k for m in mags)
    best = Fraction(0)
    for i in range(tail.truncation - k + 1):
        p = Fraction(1)
        for m in mags[i : i + k]:
            p *= m
        best = max(best, p)
    return best


def check_contraction(tail: Tail, k_max: int = 40) -> bool:
    """``||A2^k|| <= r^k`` for every ``N <= k <= k_max``."""
    return all(tail_power_norm(tail, k) <= tail.r**k for k in range(tail.N, k_max + 1))


@dataclass(frozen=True)
class PropertyPOperator:
    """``T = (head, tail)`` acting on ``(x_head, x_tail)``.

    ``head`` carries its own ``c`` and ``x``; ``c_tail`` and ``x_tail`` are
    coordinate sequences of length ``tail.truncation``.
    """

    head: Optional[JordanSystem]
    tail: Tail
    c_tail: tuple
    x_tail: tuple

    def __post_init__(self):
        for name in ("c_tail", "x_tail"):
            seq = tuple(getattr(self, name))
            object.__setattr__(self, name, seq)
            if len(seq) != self.tail.truncation:
                raise ShapeError(
                    f"{name} has length {len(seq)}, truncation is {self.tail.truncation}"
                )

    @property
    def is_linear(self) -> bool:
        head_linear = self.head is None or self.head.c.is_zero()
        return head_linear and all(is_zero(z) for z in self.c_tail)


def tail_orbit(op: PropertyPOperator, K: int, x_tail: Optional[Sequence] = None) -> list:
    """Exact tail states ``y_0 .. y_K`` of ``y -> A2 y + c_tail``."""
    y = tuple(op.x_tail if x_tail is None else x_tail)
    out = [y]
    for _ in range(K):
        y = tuple(a + b for a, b in zip(apply_tail(op.tail, y), op.c_tail))
        out.append(y)
    return out


def _geometric_prefix(op: PropertyPOperator) -> tuple:
    # c + A c + ... + A^(N-1) c
    acc = (0,) * op.tail.truncation
    term = op.c_tail
    for _ in range(op.tail.N):
        acc = tuple(a + b for a, b in zip(acc, term))
        term = apply_tail(op.tail, term)
    return acc


def tail_bound(op: PropertyPOperator, x_tail: Optional[Sequence] = None, k: int = 0):
    """Upper bound on ``||tail part of T^k x||`` valid for ``k >= N``:
    ``r^k ||x2|| + ||c2 + A c2 + ... + A^(N-1) c2|| + ||c2|| / (1 - r)``.

    The last two terms are dropped when ``c2 = 0``.
    """
    tail = op.tail
    if k < tail.N:
        raise DomainError(f"tail bound holds for k >= N = {tail.N}, got k={k}")
    x2 = op.x_tail if x_tail is None else tuple(x_tail)
    bound = tail.r**k * _sup(x2)
    c_norm = _sup(op.c_tail)
    if c_norm:
        bound += _sup(_geometric_prefix(op)) + c_norm / (1 - tail.r)
    return bound


def classify_property_p(op: PropertyPOperator) -> Verdict:
    """Verdict for the full orbit.

    The tail part is bounded, and converges (to 0 when ``c2 = 0``), so the
    head decides: divergence, oscillation and, for ``c = 0``, the split
    between tending to 0 and staying away from 0.
    """
    linear = op.is_linear
    tail_converges_to_zero = all(is_zero(z) for z in op.c_tail)
    notes = ["tail bounded by its contraction estimate"]
    if op.head is None or not op.head.blocks:
        kind = Kind.CONVERGES_TO_ZERO if tail_converges_to_zero else Kind.CONVERGES_TO_CONSTANT
        return Verdict(kind, (), notes=tuple(notes))
    head = classify_system(op.head)
    tol = float_tolerance(op.head)
    verdict = assemble(head.blocks, linear=linear, tol=tol, uncertain=head.uncertain)
    if verdict.kind is Kind.CONVERGES_TO_ZERO and not tail_converges_to_zero:
        notes.append("tail converges to a nonzero fixed point")
        return Verdict(Kind.CONVERGES_TO_CONSTANT, verdict.blocks, uncertain=verdict.uncertain,
                       notes=tuple(notes))
    return Verdict(verdict.kind, verdict.blocks, verdict.witness, verdict.limit,
                   uncertain=verdict.uncertain, notes=tuple(notes))


def _float_tail_orbit_norms(op: PropertyPOperator, K: int) -> np.ndarray:
    w = np.array([complex(z) for z in op.tail.weights])
    c = np.array([complex(z) for z in op.c_tail])
    y = np.array([complex(z) for z in op.x_tail])
    n = y.size
    norms = np.empty(K + 1)
    norms[0] = np.abs(y).max(initial=0.0)
    if op.tail.kind == "diagonal":
        for k in range(1, K + 1):
            y = w * y + c
            norms[k] = np.abs(y).max(initial=0.0)
        return norms
    # a shift only touches coordinates up to the current edge of the support
    nonzero = np.flatnonzero((y != 0) | (c != 0))
    edge = int(nonzero[-1]) + 1 if nonzero.size else 0
    for k in range(1, K + 1):
        if edge == n and y[-1] * w[-1] != 0:
            raise DomainError("orbit left the truncated space; raise the truncation")
        edge = min(n, edge + 1)
        head = y[: edge - 1] * w[: edge - 1]
        y[1:edge] = head
        y[0] = 0
        y[:edge] += c[:edge]
        while edge and y[edge - 1] == 0:
            edge -= 1
        norms[k] = np.abs(y[:edge]).max(initial=0.0)
    return norms


def simulate_norms(op: PropertyPOperator, K: int) -> tuple:
    """Float norms of the full orbit for ``k = 0..K`` and their empirical
    reading, as ``(norms, label)``."""
    tail_norms = _float_tail_orbit_norms(op, K)
    float_sup = lambda seq: max((abs(complex(z)) for z in seq if z != 0), default=0.0)
    scale = max(1.0, float_sup(op.x_tail), float_sup(op.c_tail))
    if op.head is None or not op.head.blocks:
        return tail_norms, empirical_class(tail_norms, scale)
    states, overflow = float_orbit_states(op.head, K)
    mags = np.abs(states)
    head_norms = np.maximum.reduceat(mags, op.head.segment_starts(), axis=1).sum(axis=1)
    norms = head_norms + tail_norms[: head_norms.size]
    scale = max(scale, input_scale(op.head))
    return norms, empirical_class(norms, scale, overflow)


# -- a weighted shift without the splitting ----------------------------------


def triangular(n: int) -> int:
    """``c_n = n (n + 1) / 2``."""
    return n * (n + 1) // 2


@dataclass(frozen=True)
class WeightedShift:
    """``e_i -> w_i e_{i+1}`` with ``w_i = 1/2`` on ``[c_{2n}, c_{2n+1} - 1]``
    and ``w_i = 2`` on ``[c_{2n-1}, c_{2n} - 1]``.

    The runs have lengths 1, 2, 3, ... so ``A^k e_0`` has norm ``2^-n`` at
    ``k = c_{2n-1}`` and ``2^n`` at ``k = c_{2n}``.
    """

    truncation: int = DEFAULT_TRUNCATION

    def weight(self, i: int) -> Fraction:
        n = 0
        while triangular(n + 1) <= i:
            n += 1
        # i lies in [c_n, c_{n+1} - 1]
        return Fraction(1, 2) if n % 2 == 0 else Fraction(2)

    def weights(self) -> tuple:
        return tuple(self.weight(i) for i in range(self.truncation))


def weighted_shift_orbit(shift: WeightedShift, K: int) -> list:
    """Exact norms ``||A^k e_0|| = w_0 w_1 ... w_{k-1}`` for ``k = 0..K``."""
    if K >= shift.truncation:
        raise DomainError(
            f"A^{K} e_0 sits at coordinate {K}, outside truncation {shift.truncation}"
        )
    norms = [Fraction(1)]
    for i in range(K):
        norms.append(norms[-1] * shift.weight(i))
    return norms


def example1_subsequences(shift: WeightedShift, n_max: int = 6) -> dict:
    """The three behaviours of the shift orbit from ``e_0``.

    ``"decaying"``: ``(c_{2n-1}, 2^-n)``; ``"growing"``: ``(c_{2n}, 2^n)``;
    ``"unit"``: every ``k`` where the norm returns to 1.
    """
    K = triangular(2 * n_max)
    norms = weighted_shift_orbit(shift, K)
    return {
        "decaying": [(triangular(2 * n - 1), norms[triangular(2 * n - 1)]) for n in range(1, n_max + 1)],
        "growing": [(triangular(2 * n), norms[triangular(2 * n)]) for n in range(1, n_max + 1)],
        "unit": [k for k in range(1, K + 1) if norms[k] == 1],
    }
