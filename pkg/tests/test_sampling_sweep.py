from __future__ import annotations

import random

import pytest

from orbit_verdict.averages import fixed_point
from orbit_verdict.gallery import GALLERY, example2_system
from orbit_verdict.iterates import brute_force_orbit
from orbit_verdict.sampling import (
    LAMBDA_POOL,
    perturbation_family,
    random_scalar,
    random_system,
    system_pool,
)
from orbit_verdict.scalar import Scalar
from orbit_verdict.sweep import SweepConfig, identity_sweep, thread_count


def test_pool_is_reproducible():
    a = system_pool(20, seed=5)
    b = system_pool(20, seed=5)
    assert a == b
    assert system_pool(20, seed=6) != a


def test_random_system_limits():
    rng = random.Random(0)
    for _ in range(100):
        sys = random_system(rng)
        assert 1 <= len(sys.blocks) <= 4
        assert all(1 <= n <= 5 for n in sys.sizes)
        assert all(b.lam in LAMBDA_POOL for b in sys.blocks)
    assert all(random_system(rng, linear=True).c.is_zero() for _ in range(20))


def test_random_scalar_denominators():
    rng = random.Random(1)
    for _ in range(200):
        z = random_scalar(rng, denominators=(1, 2, 4))
        assert z.real.denominator in (1, 2, 4) and z.imag.denominator in (1, 2, 4)


def test_perturbation_family_shape():
    items = list(perturbation_family(10, seed=2))
    starts = [sys for sys, q in items if q == -1]
    assert len(starts) == 10
    assert len(items) == sum(sys.dim + 1 for sys in starts)
    for sys, q in items:
        star = fixed_point(sys)
        diff = [a - b for a, b in zip(sys.x.flat(), star.flat())]
        assert [i for i, z in enumerate(diff) if z != 0] == ([] if q < 0 else [q])


def test_identity_sweep_passes_and_is_deterministic(monkeypatch):
    cfg = SweepConfig(max_k=12, max_j=5, trials=3, seed=1)
    one = identity_sweep(cfg, threads=1)
    many = identity_sweep(cfg, threads=4)
    assert [r.name for r in one] == [r.name for r in many]
    assert [(r.cases, r.failures) for r in one] == [(r.cases, r.failures) for r in many]
    assert all(r.passed for r in one) and len(one) == 11


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("ORBIT_VERDICT_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("ORBIT_VERDICT_THREADS", "0")
    with pytest.raises(ValueError):
        thread_count()
    monkeypatch.setenv("ORBIT_VERDICT_THREADS", "many")
    with pytest.raises(ValueError):
        thread_count()
    monkeypatch.delenv("ORBIT_VERDICT_THREADS")
    assert thread_count() >= 1


def test_gallery_checks_pass():
    for name, report in GALLERY.items():
        assert all(report()["checks"].values()), name


def test_example2_orbit_cycle():
    sys = example2_system()
    c = sys.c
    states = brute_force_orbit(sys, 20).states
    assert states[0].is_zero() and states[1] == c
    assert states[2].segments[0][0] == Scalar(1, 1)
    assert all(states[4 * n].is_zero() and states[4 * n + 1] == c for n in range(5))
