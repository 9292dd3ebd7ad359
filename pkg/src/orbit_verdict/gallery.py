"""Three small systems whose behaviour is worth keeping as regressions.

* ``example1``: a bounded weighted shift with no finite-dimensional
  splitting; its orbit is unbounded yet keeps returning near 0.
* ``example2``: ``T x = i x + c`` on C; the orbit from 0 cycles with period 4
  through ``0, c, (1+i) c, i c``, so it is bounded, does not converge, and
  hits 0 infinitely often.
* ``example3``: ``A = [[i, 1], [0, i]]``, ``c = e_1``, ``x = e_2``; the
  averages do not converge to 0 but the subsequence ``k = 1 (mod 4)`` does.
"""
from __future__ import annotations

from fractions import Fraction

from .averages import brute_force_average, classify_average_system
from .iterates import brute_force_orbit, classify_system
from .jordan import JordanSystem, block_norm
from .property_p import WeightedShift, example1_subsequences, triangular, weighted_shift_orbit
from .scalar import Scalar

__all__ = ["GALLERY", "example1_report", "example2_system", "example2_report",
           "example3_system", "example3_report"]

I = Scalar(0, 1)


def example1_report(n_max: int = 6, truncation: int = 512) -> dict:
    shift = WeightedShift(truncation)
    subs = example1_subsequences(shift, n_max)
    K = triangular(2 * n_max)
    norms = weighted_shift_orbit(shift, K)
    checkpoints = [triangular(n) for n in range(1, 2 * n_max + 1)]
    return {
        "name": "example1",
        "operator": "weighted shift e_i -> w_i e_{i+1}, w in {1/2, 2} on runs of length 1, 2, 3, ...",
        "truncation": truncation,
        "norms_at_triangular": [[k, norms[k]] for k in checkpoints],
        "decaying": [[k, v] for k, v in subs["decaying"]],
        "growing": [[k, v] for k, v in subs["growing"]],
        "unit_returns": subs["unit"],
        "sup_norm": max(norms),
        "inf_norm_after_start": min(norms[1:]),
        "verdict": "neither bounded nor tending to infinity",
        "checks": {
            "decaying_is_2^-n": all(v == Fraction(1, 2**n) for n, (_, v) in enumerate(subs["decaying"], 1)),
            "growing_is_2^n": all(v == 2**n for n, (_, v) in enumerate(subs["growing"], 1)),
            "returns_to_1": len(subs["unit"]) >= n_max,
        },
    }


def example2_system() -> JordanSystem:
    return JordanSystem.build([(I, 1)], [[0]], [[1]])


def example2_report(cycles: int = 25) -> dict:
    sys = example2_system()
    K = 4 * cycles + 1
    orbit = brute_force_orbit(sys, K, mode="exact")
    values = [s.segments[0][0] for s in orbit.states]
    c = sys.c.segments[0][0]
    verdict = classify_system(sys)
    return {
        "name": "example2",
        "system": "T x = i x + c on C, c = 1, x = 0",
        "orbit": values[:9],
        "norms": orbit.norms[:9],
        "verdict": verdict,
        "checks": {
            "T^4n(0)=0": all(values[4 * n] == 0 for n in range(cycles + 1)),
            "T^(4n+1)(0)=c": all(values[4 * n + 1] == c for n in range(cycles + 1)),
        },
    }


def example3_system() -> JordanSystem:
    return JordanSystem.build([(I, 2)], [[0, 1]], [[1, 0]])


def example3_report(K: int = 1000) -> dict:
    sys = example3_system()
    trace = brute_force_average(sys, K, mode="exact")
    v_norm = block_norm(sys.x)
    norms = trace.norms
    ones = [k for k in range(1, K + 1) if k % 4 == 1]
    twos = [k for k in range(1, K + 1) if k % 4 == 2]
    return {
        "name": "example3",
        "system": "A = [[i, 1], [0, i]], c = e_1, x = e_2",
        "averages": [trace.averages[k - 1] for k in range(1, 9)],
        "norms": norms[:8],
        "verdict": classify_average_system(sys),
        "horizon": K,
        "max_norm": max(norms),
        "min_norm_k=2_mod_4": min(norms[k - 1] for k in twos),
        "checks": {
            "|Ave_k|<=|v|/k for k=1 mod 4": all(norms[k - 1] <= v_norm / k for k in ones),
            "Ave_5=v/5": trace.averages[4] == sys.x.scale(Fraction(1, 5)),
            "max_norm>0": max(norms) > 0,
        },
    }


GALLERY = {
    "example1": example1_report,
    "example2": example2_report,
    "example3": example3_report,
}
