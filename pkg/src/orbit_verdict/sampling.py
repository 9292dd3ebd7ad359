"""Random exact systems for oracle sweeps.

Segments are drawn with structure rather than uniformly, so that the
interesting cases (zero chains, short chains, points on a fixed point) turn
up often.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .averages import block_fixed_point
from .jordan import BlockVector, JordanBlock, JordanSystem
from .scalar import Scalar

__all__ = [
    "LAMBDA_POOL",
    "STRUCTURED_POOL",
    "random_scalar",
    "random_segment",
    "random_system",
    "system_pool",
    "perturbation_family",
]

I = Scalar(0, 1)
LAMBDA_POOL = (
    Scalar(0),
    Scalar(1),
    I,
    Scalar(-1),
    Scalar(Fraction(1, 2)),
    Scalar(2),
    Scalar(3),
    Scalar(Fraction(3, 5), Fraction(4, 5)),
)
STRUCTURED_POOL = (Scalar(2), Scalar(Fraction(1, 2)), I, Scalar(Fraction(3, 5), Fraction(4, 5)))


def random_scalar(rng: random.Random, denominators: Sequence[int] = (1, 2, 3), complex_rate=0.3):
    """Small Gaussian rational, zero about a quarter of the time."""
    if rng.random() < 0.25:
        return Scalar(0)
    re = Fraction(rng.randint(-4, 4), rng.choice(denominators))
    im = Fraction(rng.randint(-4, 4), rng.choice(denominators)) if rng.random() < complex_rate else 0
    return Scalar(re, im)


def random_segment(rng: random.Random, n: int, **kw) -> tuple:
    """Zero, truncated (trailing zeros) or full segment of length ``n``."""
    style = rng.random()
    if style < 0.2:
        return (Scalar(0),) * n
    seg = [random_scalar(rng, **kw) for _ in range(n)]
    if style < 0.55:
        cut = rng.randint(0, n)
        seg[cut:] = [Scalar(0)] * (n - cut)
    return tuple(seg)


def random_system(
    rng: random.Random,
    pool: Sequence = LAMBDA_POOL,
    max_blocks: int = 4,
    max_size: int = 5,
    denominators: Sequence[int] = (1, 2, 3),
    linear: Optional[bool] = None,
) -> JordanSystem:
    """Up to ``max_blocks`` blocks of size up to ``max_size``.

    ``linear=True`` forces ``c = 0``; ``None`` makes ``c = 0`` one time in
    four.  About one block in six starts at its fixed point when one exists.
    """
    nb = rng.randint(1, max_blocks)
    if linear is None:
        linear = rng.random() < 0.25
    blocks, xs, cs = [], [], []
    for _ in range(nb):
        lam = rng.choice(pool)
        n = rng.randint(1, max_size)
        block = JordanBlock(lam, n)
        c = (Scalar(0),) * n if linear else random_segment(rng, n, denominators=denominators)
        if lam != 1 and rng.random() < 1 / 6:
            x = block_fixed_point(block, c)
        else:
            x = random_segment(rng, n, denominators=denominators)
        blocks.append(block)
        xs.append(x)
        cs.append(c)
    return JordanSystem(tuple(blocks), BlockVector(tuple(cs)), BlockVector(tuple(xs)))


def system_pool(count: int, seed: int = 0, **kw) -> list:
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]


def perturbation_family(
    count: int, seed: int = 0, pool: Sequence = STRUCTURED_POOL, max_size: int = 4
) -> Iterator[tuple]:
    """Single-block systems ``x = x* + delta e_q`` around the fixed point.

    Yields ``(system, q)`` with ``q = -1`` for the unperturbed fixed point.
    Each draw contributes the fixed point and one perturbation along every
    coordinate of the chain, so ``count`` draws give ``count * (size + 1)``
    systems.
    """
    rng = random.Random(seed)
    for _ in range(count):
        lam = rng.choice(pool)
        n = rng.randint(1, max_size)
        block = JordanBlock(lam, n)
        c = tuple(random_scalar(rng) for _ in range(n))
        star = block_fixed_point(block, c)
        yield JordanSystem((block,), BlockVector((c,)), BlockVector((star,))), -1
        for q in range(n):
            x = list(star)
            delta = random_scalar(rng)
            while delta == 0:
                delta = random_scalar(rng)
            x[q] = x[q] + delta
            yield JordanSystem((block,), BlockVector((c,)), BlockVector((tuple(x),))), q
