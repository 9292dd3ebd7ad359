"""Classification outcomes and the empirical reading of float orbits."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .jordan import BlockVector, JordanSystem, block_norm, seg_is_zero

__all__ = [
    "Kind",
    "BlockVerdict",
    "Verdict",
    "assemble",
    "input_scale",
    "empirical_class",
    "DIVERGENCE_FACTOR",
]

# A float orbit whose norm passes DIVERGENCE_FACTOR * scale is read as divergent.
DIVERGENCE_FACTOR = 1e6
# Least-squares rise over the last half, relative to its mean, that counts as growth.
GROWTH_RISE = 0.1


class Kind(str, Enum):
    DIVERGES = "DivergesToInfinity"
    BOUNDED = "Bounded"
    CONVERGES_TO_ZERO = "ConvergesToZero"
    CONVERGES_TO_CONSTANT = "ConvergesToConstant"
    BOUNDED_AWAY = "BoundedAwayFromZero"


@dataclass(frozen=True)
class BlockVerdict:
    """Outcome for one Jordan block.

    ``kind`` is DIVERGES, BOUNDED (bounded, not convergent),
    CONVERGES_TO_ZERO or CONVERGES_TO_CONSTANT.  ``limit`` holds the limit
    segment for convergent blocks.
    """

    kind: Kind
    case: str
    witness: Optional[str] = None
    limit: Optional[tuple] = None

    @classmethod
    def converging(cls, limit: Sequence, case: str, tol: float = 0.0, witness=None):
        kind = Kind.CONVERGES_TO_ZERO if seg_is_zero(limit, tol) else Kind.CONVERGES_TO_CONSTANT
        return cls(kind, case, witness, tuple(limit))


@dataclass(frozen=True)
class Verdict:
    kind: Kind
    blocks: tuple
    witness: Optional[str] = None
    limit: Optional[BlockVector] = None
    bounds: Optional[tuple] = None
    uncertain: bool = False
    notes: tuple = field(default_factory=tuple)

    @property
    def diverges(self) -> bool:
        return self.kind is Kind.DIVERGES


def assemble(blocks: Sequence[BlockVerdict], linear: bool, tol: float = 0.0, uncertain=False):
    """Combine block outcomes: one divergent block makes the whole orbit
    divergent; otherwise the orbit is bounded, and it converges exactly when
    every block does.

    With ``linear=True`` (``c = 0``) the bounded case is split further:
    every block tending to 0 gives CONVERGES_TO_ZERO, anything else is
    BOUNDED_AWAY.
    """
    blocks = tuple(blocks)
    for i, b in enumerate(blocks):
        if b.kind is Kind.DIVERGES:
            return Verdict(Kind.DIVERGES, blocks, f"block {i}: {b.witness}", uncertain=uncertain)
    if all(b.limit is not None for b in blocks):
        limit = BlockVector(tuple(b.limit for b in blocks))
        if limit.is_zero(tol):
            return Verdict(Kind.CONVERGES_TO_ZERO, blocks, limit=limit, uncertain=uncertain)
        kind = Kind.BOUNDED_AWAY if linear else Kind.CONVERGES_TO_CONSTANT
        return Verdict(kind, blocks, limit=limit, uncertain=uncertain)
    oscillating = next(i for i, b in enumerate(blocks) if b.limit is None)
    kind = Kind.BOUNDED_AWAY if linear else Kind.BOUNDED
    witness = f"block {oscillating}: {blocks[oscillating].witness}"
    return Verdict(kind, blocks, witness, uncertain=uncertain)


def input_scale(sys: JordanSystem) -> float:
    """``max(1, |x|, |c|)`` in the block norm."""
    return float(max(1, block_norm(sys.x), block_norm(sys.c)))


def empirical_class(norms: np.ndarray, scale: float, overflow_step: Optional[int] = None) -> str:
    """Read a float norm sequence as ``"diverges"`` or ``"bounded"``.

    Divergent if the orbit overflowed, passed ``DIVERGENCE_FACTOR * scale``,
    or shows sustained growth over the second half of the horizon: the
    least-squares line through that half rises by more than ``GROWTH_RISE``
    times the half's mean norm.  This is a heuristic; closed-form verdicts
    are authoritative.
    """
    if overflow_step is not None:
        return "diverges"
    norms = np.asarray(norms, dtype=float)
    if norms.size == 0:
        return "bounded"
    if norms.max() > DIVERGENCE_FACTOR * scale:
        return "diverges"
    half = norms[norms.size // 2 :]
    if half.size >= 8:
        ks = np.arange(half.size, dtype=float)
        slope = np.polyfit(ks, half, 1)[0]
        if slope * half.size > GROWTH_RISE * half.mean() and half.mean() > 0:
            return "diverges"
    return "bounded"
