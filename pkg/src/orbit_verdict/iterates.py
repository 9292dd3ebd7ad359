"""Closed forms for the iterates ``T^k x`` and their classification.

On a block with eigenvalue ``lam`` and segments ``v`` (of ``x``) and ``d``
(of ``c``), with nilpotent indices ``s`` and ``t``:

* ``lam != 1``: ``T^k x = B + sum_{j<w} lam^(k-j) C(k,j) A_j`` where
  ``w = max(s, t)``;
* ``lam == 1``: ``T^k x = v + sum_{j=1}^{l} C(k,j) B_j`` where
  ``l = max(s-1, t)``;

both for ``k > max(s, t)``.  The coefficient vectors do not depend on ``k``,
so the block's long-run behaviour is read off their (exact) nonzeroness.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .combinatorics import binom
from .errors import DomainError
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
from .scalar import unit_compare
from .verdict import BlockVerdict, Kind, Verdict, assemble, empirical_class, input_scale

__all__ = [
    "IterateExpansion",
    "UnitIterateExpansion",
    "Orbit",
    "expand_block",
    "expand_system",
    "eval_iterate",
    "eval_system",
    "classify_block",
    "classify_system",
    "brute_force_orbit",
    "float_tolerance",
    "CASE_LABELS",
]

CASE_LABELS = {
    1: "Case 1: |lambda|>1",
    2: "Case 2: |lambda|=1, lambda!=1",
    3: "Case 3: lambda=1",
    4: "Case 4: |lambda|<1",
}

# Float-mode zero threshold, relative to 1 + input scale.
FLOAT_ZERO = 1e-12


def _eps(r: int) -> int:
    return 1 if r >= 0 else 0


@dataclass(frozen=True)
class IterateExpansion:
    lam: object
    s: int
    t: int
    w: int
    A: tuple
    B: tuple


@dataclass(frozen=True)
class UnitIterateExpansion:
    v: tuple
    s: int
    t: int
    l: int
    Bseq: tuple  # B_1 ... B_l

    lam = 1


Expansion = Union[IterateExpansion, UnitIterateExpansion]


def _sum_chain(d, j: int, t: int, inv: list):
    # sum_{i=j}^{t-1} N^i d / (1-lam)^(i-j+1)
    acc = (0,) * len(d)
    for i in range(j, t):
        acc = seg_add(acc, seg_scale(shift(d, i), inv[i - j + 1]))
    return acc


def expand_block(block: JordanBlock, v, d, tol: float = 0.0) -> Expansion:
    """Coefficient vectors of the closed form for one block."""
    v, d = tuple(v), tuple(d)
    s, t = nilpotent_index(v, tol), nilpotent_index(d, tol)
    lam = block.lam
    n = block.size
    if lam == 1:
        l = max(s - 1, t)
        low = min(s - 1, t)
        bseq = []
        for j in range(1, l + 1):
            if j <= low:
                b = seg_add(shift(v, j), shift(d, j - 1))
            else:
                b = seg_add(
                    seg_scale(shift(v, j), _eps(s - 1 - t)),
                    seg_scale(shift(d, j - 1), _eps(t - s + 1)),
                )
            bseq.append(b)
        return UnitIterateExpansion(v, s, t, l, tuple(bseq))
    w = max(s, t)
    u = 1 - lam
    inv = [u**0]
    for _ in range(t + 1):
        inv.append(inv[-1] / u)
    coeffs = []
    for j in range(w):
        if j < min(s, t):
            a = seg_sub(shift(v, j), _sum_chain(d, j, t, inv))
        else:
            a = seg_sub(
                seg_scale(shift(v, j), _eps(s - t)),
                seg_scale(_sum_chain(d, j, t, inv), _eps(t - s)),
            )
        coeffs.append(a)
    b = (0,) * n
    for i in range(t):
        b = seg_add(b, seg_scale(shift(d, i), inv[i + 1]))
    return IterateExpansion(lam, s, t, w, tuple(coeffs), b)


def expand_system(sys: JordanSystem, tol: float = 0.0) -> list:
    return [
        expand_block(b, v, d, tol)
        for b, v, d in zip(sys.blocks, sys.x.segments, sys.c.segments)
    ]


def eval_iterate(expansion: Expansion, k: int) -> tuple:
    """Value of the block segment of ``T^k x``; needs ``k > max(s, t)``."""
    if k <= max(expansion.s, expansion.t):
        raise DomainError(
            f"closed form holds for k > max(s, t) = {max(expansion.s, expansion.t)}, got k={k}"
        )
    if isinstance(expansion, UnitIterateExpansion):
        out = expansion.v
        for j, b in enumerate(expansion.Bseq, start=1):
            out = seg_add(out, seg_scale(b, binom(k, j)))
        return out
    lam = expansion.lam
    out = expansion.B
    for j, a in enumerate(expansion.A):
        out = seg_add(out, seg_scale(a, lam ** (k - j) * binom(k, j)))
    return out


def eval_system(expansions, k: int) -> BlockVector:
    return BlockVector(tuple(eval_iterate(e, k) for e in expansions))


def _first_nonzero(vectors, start: int, tol: float) -> Optional[int]:
    for j in range(start, len(vectors)):
        if not seg_is_zero(vectors[j], tol):
            return j
    return None


def classify_block(expansion: Expansion, tol: float = 0.0) -> BlockVerdict:
    """Long-run behaviour of one block from its closed-form coefficients."""
    if isinstance(expansion, UnitIterateExpansion):
        case = CASE_LABELS[3]
        j = _first_nonzero(expansion.Bseq, 0, tol)
        if j is not None:
            return BlockVerdict(Kind.DIVERGES, case, f"B_{j + 1} != 0")
        return BlockVerdict.converging(expansion.v, case, tol, "constant v")
    where = unit_compare(expansion.lam, tol)
    A, B = expansion.A, expansion.B
    if where > 0:
        case = CASE_LABELS[1]
        j = _first_nonzero(A, 0, tol)
        if j is not None:
            return BlockVerdict(Kind.DIVERGES, case, f"A_{j} != 0")
        return BlockVerdict.converging(B, case, tol, "constant B")
    if where == 0:
        case = CASE_LABELS[2]
        j = _first_nonzero(A, 1, tol)
        if j is not None:
            return BlockVerdict(Kind.DIVERGES, case, f"A_{j} != 0")
        if A and not seg_is_zero(A[0], tol):
            return BlockVerdict(Kind.BOUNDED, case, "B + lam^k A_0 with A_0 != 0")
        return BlockVerdict.converging(B, case, tol, "constant B")
    return BlockVerdict.converging(B, CASE_LABELS[4], tol, "converges to B")


def float_tolerance(sys: JordanSystem) -> float:
    return 0.0 if sys.mode == "exact" else FLOAT_ZERO * (1 + input_scale(sys))


def classify_system(sys: JordanSystem, horizon: Optional[int] = None) -> Verdict:
    """Dichotomy for the iterates of ``sys``, refined to the trichotomy
    when ``c = 0``.

    When ``horizon`` is given and the verdict is BOUNDED_AWAY, empirical
    bounds ``(F, G)`` are read from the window ``[K/2, K]`` of a float orbit.
    """
    tol = float_tolerance(sys)
    subs = [classify_block(e, tol) for e in expand_system(sys, tol)]
    verdict = assemble(subs, linear=sys.c.is_zero(tol), tol=tol, uncertain=tol > 0)
    if horizon and verdict.kind is Kind.BOUNDED_AWAY:
        orbit = brute_force_orbit(sys, horizon, mode="float")
        window = np.asarray(orbit.norms[horizon // 2 :], dtype=float)
        verdict = replace(verdict, bounds=(float(window.min()), float(window.max())))
    return verdict


# -- oracle -------------------------------------------------------------------


@dataclass
class Orbit:
    """States ``x_0 .. x_K`` (BlockVectors in exact mode, an array in float
    mode), their block norms and the empirical reading of the norms."""

    states: object
    norms: object
    empirical: str
    scale: float
    overflow_step: Optional[int] = None


def _segment_norms(states: np.ndarray, sys: JordanSystem) -> np.ndarray:
    mags = np.abs(states)
    return np.maximum.reduceat(mags, sys.segment_starts(), axis=1).sum(axis=1)


def float_orbit_states(sys: JordanSystem, K: int):
    """Float iteration of ``T`` for ``K`` steps; stops at the first
    non-finite state and returns ``(states, overflow_step)``."""
    a = sys.matrix()
    c = np.array([complex(z) for z in sys.c.flat()], dtype=complex)
    x = np.array([complex(z) for z in sys.x.flat()], dtype=complex)
    states = np.empty((K + 1, sys.dim), dtype=complex)
    states[0] = x
    overflow = None
    with np.errstate(all="ignore"):
        for k in range(1, K + 1):
            x = a @ x + c
            if not np.isfinite(x).all():
                overflow = k
                states = states[:k]
                break
            states[k] = x
    return states, overflow


def brute_force_orbit(sys: JordanSystem, K: int, mode: Optional[str] = None) -> Orbit:
    """Apply ``T`` ``K`` times from ``x``; exact in exact mode."""
    if K < 1:
        raise DomainError("horizon K must be >= 1")
    mode = mode or sys.mode
    scale = input_scale(sys)
    if mode == "exact":
        states = [sys.x]
        for _ in range(K):
            states.append(apply_affine(sys, states[-1]))
        norms = [block_norm(s) for s in states]
        return Orbit(states, norms, empirical_class(np.array(norms, dtype=float), scale), scale)
    states, overflow = float_orbit_states(sys, K)
    norms = _segment_norms(states, sys)
    return Orbit(states, norms, empirical_class(norms, scale, overflow), scale, overflow)
