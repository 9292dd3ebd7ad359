"""Jordan-block data for an affine map ``T(x) = A x + c``.

``A`` acts on each block as ``lam * I + N`` where ``N`` shifts coordinates
toward index 0: ``N e_q = e_{q-1}`` and ``N e_0 = 0``.  As a matrix this is
the usual superdiagonal Jordan block, e.g. ``[[i, 1], [0, i]]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeError
from .scalar import abs2, as_scalar, is_exact, is_zero, modulus

__all__ = [
    "JordanBlock",
    "BlockVector",
    "JordanSystem",
    "shift",
    "seg_add",
    "seg_sub",
    "seg_scale",
    "seg_is_zero",
    "nilpotent_index",
    "segment_norm",
    "block_norm",
    "apply_affine",
    "diagonal_system",
]

Segment = tuple


# -- segment arithmetic -----------------------------------------------------


def shift(seg: Sequence, p: int = 1) -> Segment:
    """``N^p`` applied to one block segment."""
    n = len(seg)
    if p >= n:
        return (0,) * n
    return tuple(seg[p:]) + (0,) * p


def seg_add(a: Sequence, b: Sequence) -> Segment:
    return tuple(x + y for x, y in zip(a, b))


def seg_sub(a: Sequence, b: Sequence) -> Segment:
    return tuple(x - y for x, y in zip(a, b))


def seg_scale(a: Sequence, s) -> Segment:
    return tuple(x * s for x in a)


def seg_is_zero(a: Sequence, tol: float = 0.0) -> bool:
    return all(is_zero(x, tol) for x in a)


def nilpotent_index(segment: Sequence, tol: float = 0.0) -> int:
    """Smallest ``s >= 0`` with ``N^s v = 0``: one past the last nonzero entry.

    >>> nilpotent_index((0, 1)), nilpotent_index((1, 0)), nilpotent_index((0, 0))
    (2, 1, 0)
    """
    for q in range(len(segment) - 1, -1, -1):
        if not is_zero(segment[q], tol):
            return q + 1
    return 0


def segment_norm(seg: Sequence):
    """Max-modulus norm of a segment; exact (Fraction) whenever possible."""
    if not seg:
        return Fraction(0)
    if all(is_exact(z) for z in seg):
        return modulus(max(seg, key=abs2))
    return max(abs(complex(z)) for z in seg)


# -- containers ---------------------------------------------------------------


@dataclass(frozen=True)
class JordanBlock:
    lam: object
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ShapeError(f"block size must be >= 1, got {self.size}")


@dataclass(frozen=True)
class BlockVector:
    """A vector split into per-block coordinate segments."""

    segments: tuple

    @classmethod
    def from_lists(cls, segments: Iterable[Iterable], mode: str = "exact") -> "BlockVector":
        return cls(tuple(tuple(as_scalar(z, mode) for z in seg) for seg in segments))

    @classmethod
    def zeros(cls, sizes: Sequence[int]) -> "BlockVector":
        return cls(tuple((0,) * n for n in sizes))

    @property
    def sizes(self) -> tuple:
        return tuple(len(s) for s in self.segments)

    def __add__(self, other: "BlockVector") -> "BlockVector":
        if self.sizes != other.sizes:
            raise ShapeError(f"cannot add block vectors of shapes {self.sizes} and {other.sizes}")
        return BlockVector(tuple(seg_add(a, b) for a, b in zip(self.segments, other.segments)))

    def __sub__(self, other: "BlockVector") -> "BlockVector":
        return self + other.scale(-1)

    def scale(self, s) -> "BlockVector":
        return BlockVector(tuple(seg_scale(a, s) for a in self.segments))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(seg_is_zero(s, tol) for s in self.segments)

    def flat(self) -> list:
        return [z for seg in self.segments for z in seg]

    def __eq__(self, other):
        if not isinstance(other, BlockVector):
            return NotImplemented
        return self.sizes == other.sizes and all(
            a == b for sa, sb in zip(self.segments, other.segments) for a, b in zip(sa, sb)
        )

    def __hash__(self):
        return hash(self.sizes)


@dataclass(frozen=True)
class JordanSystem:
    """Jordan blocks plus the decomposed ``c`` and starting point ``x``."""

    blocks: tuple
    c: BlockVector
    x: BlockVector

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        sizes = tuple(b.size for b in self.blocks)
        for name in ("c", "x"):
            vec = getattr(self, name)
            if len(vec.segments) != len(sizes):
                raise ShapeError(
                    f"{name} has {len(vec.segments)} segments but there are {len(sizes)} blocks"
                )
            for i, (seg, n) in enumerate(zip(vec.segments, sizes)):
                if len(seg) != n:
                    raise ShapeError(f"{name}[{i}] has length {len(seg)}, block {i} has size {n}")

    @classmethod
    def build(cls, blocks: Sequence[tuple], x: Sequence, c: Sequence, mode: str = "exact"):
        """Convenience constructor from ``[(lam, size), ...]`` and nested lists."""
        jb = tuple(JordanBlock(as_scalar(lam, mode), size) for lam, size in blocks)
        return cls(jb, BlockVector.from_lists(c, mode), BlockVector.from_lists(x, mode))

    @property
    def sizes(self) -> tuple:
        return tuple(b.size for b in self.blocks)

    @property
    def dim(self) -> int:
        return sum(self.sizes)

    @property
    def mode(self) -> str:
        values = [b.lam for b in self.blocks] + self.c.flat() + self.x.flat()
        return "exact" if all(is_exact(z) for z in values) else "float"

    def with_x(self, x: BlockVector) -> "JordanSystem":
        return JordanSystem(self.blocks, self.c, x)

    def to_float(self) -> "JordanSystem":
        blocks = tuple(JordanBlock(complex(b.lam), b.size) for b in self.blocks)
        conv = lambda v: BlockVector(tuple(tuple(complex(z) for z in s) for s in v.segments))
        return JordanSystem(blocks, conv(self.c), conv(self.x))

    def matrix(self) -> np.ndarray:
        """Dense complex matrix of ``A`` in the block basis."""
        n = self.dim
        a = np.zeros((n, n), dtype=complex)
        off = 0
        for b in self.blocks:
            for q in range(b.size):
                a[off + q, off + q] = complex(b.lam)
                if q + 1 < b.size:
                    a[off + q, off + q + 1] = 1.0
            off += b.size
        return a

    def segment_starts(self) -> np.ndarray:
        return np.cumsum((0,) + self.sizes[:-1])


def block_norm(v: BlockVector):
    """``sum_i ||segment_i||`` with the max-modulus norm inside each block."""
    total = Fraction(0)
    for seg in v.segments:
        total = total + segment_norm(seg)
    return total


def apply_affine(sys: JordanSystem, v: BlockVector) -> BlockVector:
    """One application of ``T``: ``A v + c``, computed blockwise."""
    if v.sizes != sys.sizes:
        raise ShapeError(f"vector shape {v.sizes} does not match blocks {sys.sizes}")
    out = []
    for block, seg, cseg in zip(sys.blocks, v.segments, sys.c.segments):
        lam = block.lam
        n = block.size
        out.append(
            tuple(
                lam * seg[q] + (seg[q + 1] if q + 1 < n else 0) + cseg[q] for q in range(n)
            )
        )
    return BlockVector(tuple(out))


def diagonal_system(eigenvalues: Sequence, x: Sequence, c: Sequence, mode: str = "exact"):
    """System for a diagonal matrix with user-supplied eigenvalues."""
    if not (len(eigenvalues) == len(x) == len(c)):
        raise ShapeError("eigenvalues, x and c must have equal length")
    return JordanSystem.build(
        [(lam, 1) for lam in eigenvalues], [[z] for z in x], [[z] for z in c], mode
    )
