"""JSON problem files and exact serialization.

A problem file looks like::

    {
      "scalar_mode": "exact",
      "blocks": [{"lambda": {"re": "1/2", "im": "0"}, "size": 1}],
      "x": [[{"re": "0", "im": "0"}]],
      "c": [["1"]],
      "horizon": 200,
      "tail": {"kind": "diagonal", "r": "1/2", "N": 1, "truncation": 16,
               "x": ["1"], "c": []}
    }

A scalar is either ``{"re": ..., "im": ...}`` or a bare real value; real and
imaginary parts are rational strings (``"3/7"``, ``"-2"``, ``"0.25"``) or
JSON integers.  JSON floats are only accepted in float mode.  ``tail.x`` and
``tail.c`` are prefixes, padded with zeros up to ``truncation``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Optional

from .jordan import BlockVector, JordanBlock, JordanSystem
from .property_p import DEFAULT_TRUNCATION, PropertyPOperator, Tail
from .scalar import Scalar, is_exact
from .verdict import Kind, Verdict

__all__ = [
    "ProblemError",
    "ProblemSpec",
    "parse_problem",
    "load_problem",
    "scalar_to_json",
    "number_to_json",
    "segment_to_json",
    "vector_to_json",
    "verdict_to_json",
    "to_jsonable",
]

DEFAULT_HORIZON = 1000


class ProblemError(ValueError):
    """A problem file is malformed; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class ProblemSpec:
    system: JordanSystem
    mode: str
    horizon: int
    tail: Optional[PropertyPOperator] = None


def _rational(value: Any, path: str, mode: str):
    if isinstance(value, bool):
        raise ProblemError(path, "booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ProblemError(path, f"cannot parse {value!r} as a rational") from None
    if isinstance(value, float):
        if mode != "float":
            raise ProblemError(path, "floats are not allowed in exact mode; write a rational string")
        if not math.isfinite(value):
            raise ProblemError(path, "non-finite number")
        return value
    raise ProblemError(path, f"expected a rational string or integer, got {type(value).__name__}")


def _scalar(value: Any, path: str, mode: str):
    if isinstance(value, dict):
        unknown = set(value) - {"re", "im"}
        if unknown:
            raise ProblemError(path, f"unknown keys {sorted(unknown)}")
        re = _rational(value.get("re", 0), f"{path}.re", mode)
        im = _rational(value.get("im", 0), f"{path}.im", mode)
    else:
        re, im = _rational(value, path, mode), 0
    if mode == "float":
        return complex(float(re), float(im))
    return Scalar(re, im)


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ProblemError(path, f"expected a list, got {type(value).__name__}")
    return value


def _int(value: Any, path: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemError(path, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ProblemError(path, f"must be >= {minimum}, got {value}")
    return value


def _vector(raw: Any, name: str, sizes: list, mode: str) -> BlockVector:
    segs = _list(raw, name)
    if len(segs) != len(sizes):
        raise ProblemError(name, f"has {len(segs)} segments but there are {len(sizes)} blocks")
    out = []
    for i, (seg, n) in enumerate(zip(segs, sizes)):
        seg = _list(seg, f"{name}[{i}]")
        if len(seg) != n:
            raise ProblemError(f"{name}[{i}]", f"has length {len(seg)}, block {i} has size {n}")
        out.append(tuple(_scalar(z, f"{name}[{i}][{q}]", mode) for q, z in enumerate(seg)))
    return BlockVector(tuple(out))


def _padded(raw: Any, path: str, length: int, mode: str) -> tuple:
    seq = _list(raw, path)
    if len(seq) > length:
        raise ProblemError(path, f"has {len(seq)} entries, truncation is {length}")
    vals = [_scalar(z, f"{path}[{q}]", mode) for q, z in enumerate(seq)]
    zero = Scalar(0) if mode == "exact" else 0j
    return tuple(vals) + (zero,) * (length - len(vals))


def _tail(raw: Any, head: JordanSystem, mode: str) -> PropertyPOperator:
    if not isinstance(raw, dict):
        raise ProblemError("tail", "expected an object")
    kind = raw.get("kind", "diagonal")
    if kind not in ("diagonal", "shift"):
        raise ProblemError("tail.kind", f"must be 'diagonal' or 'shift', got {kind!r}")
    r = _rational(raw.get("r", "1/2"), "tail.r", "exact")
    if not 0 <= r < 1:
        raise ProblemError("tail.r", f"must lie in [0, 1), got {r}")
    n_steps = _int(raw.get("N", 1), "tail.N", 1)
    trunc = _int(raw.get("truncation", DEFAULT_TRUNCATION), "tail.truncation", 1)
    if "weights" in raw:
        weights = _list(raw["weights"], "tail.weights")
        if len(weights) != trunc:
            raise ProblemError("tail.weights", f"has {len(weights)} entries, truncation is {trunc}")
        weights = tuple(_rational(w, f"tail.weights[{i}]", "exact") for i, w in enumerate(weights))
    else:
        weights = (r,) * trunc
    tail = Tail(kind, weights, r, n_steps)
    x_tail = _padded(raw.get("x", []), "tail.x", trunc, mode)
    c_tail = _padded(raw.get("c", []), "tail.c", trunc, mode)
    return PropertyPOperator(head, tail, c_tail, x_tail)


def parse_problem(data: Any) -> ProblemSpec:
    """Validate a decoded JSON object and build the system it describes."""
    if not isinstance(data, dict):
        raise ProblemError("$", "expected a JSON object")
    known = {"scalar_mode", "blocks", "x", "c", "tail", "horizon"}
    unknown = set(data) - known
    if unknown:
        raise ProblemError("$", f"unknown keys {sorted(unknown)}")
    mode = data.get("scalar_mode", "exact")
    if mode not in ("exact", "float"):
        raise ProblemError("scalar_mode", f"must be 'exact' or 'float', got {mode!r}")
    if "blocks" not in data:
        raise ProblemError("blocks", "missing")
    blocks = []
    for i, b in enumerate(_list(data["blocks"], "blocks")):
        if not isinstance(b, dict):
            raise ProblemError(f"blocks[{i}]", "expected an object")
        if "lambda" not in b:
            raise ProblemError(f"blocks[{i}].lambda", "missing")
        lam = _scalar(b["lambda"], f"blocks[{i}].lambda", mode)
        size = _int(b.get("size"), f"blocks[{i}].size", 1)
        blocks.append(JordanBlock(lam, size))
    sizes = [b.size for b in blocks]
    zeros = [[0] * n for n in sizes]
    x = _vector(data.get("x", zeros), "x", sizes, mode)
    c = _vector(data.get("c", zeros), "c", sizes, mode)
    system = JordanSystem(tuple(blocks), c, x)
    horizon = _int(data.get("horizon", DEFAULT_HORIZON), "horizon", 1)
    tail = _tail(data["tail"], system, mode) if "tail" in data else None
    return ProblemSpec(system, mode, horizon, tail)


def load_problem(text: str) -> ProblemSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError("$", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    return parse_problem(data)


# -- serialization -----------------------------------------------------------


def number_to_json(value) -> Any:
    """Exact rationals become strings; everything else a float."""
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, Rational)):
        return str(Fraction(value))
    if isinstance(value, Scalar) and value.imag == 0:
        return str(value.real)
    return float(value)


def scalar_to_json(z) -> dict:
    if isinstance(z, Scalar):
        return {"re": str(z.real), "im": str(z.imag)}
    if is_exact(z):
        return {"re": str(Fraction(z)), "im": "0"}
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def segment_to_json(seg) -> list:
    return [scalar_to_json(z) for z in seg]


def vector_to_json(v: BlockVector) -> list:
    return [segment_to_json(s) for s in v.segments]


def verdict_to_json(verdict) -> dict:
    out = {
        "kind": verdict.kind.value,
        "witness": verdict.witness,
        "limit": None if verdict.limit is None else vector_to_json(verdict.limit),
        "bounds": None if verdict.bounds is None else list(verdict.bounds),
        "numerically_uncertain": verdict.uncertain,
        "blocks": [
            {
                "index": i,
                "case": b.case,
                "kind": b.kind.value,
                "witness": b.witness,
                "limit": None if b.limit is None else segment_to_json(b.limit),
            }
            for i, b in enumerate(verdict.blocks)
        ],
    }
    if verdict.notes:
        out["notes"] = list(verdict.notes)
    return out


def to_jsonable(obj) -> Any:
    """Recursively convert results to JSON-ready values; non-integer rationals
    become strings so they stay exact."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Verdict):
        return verdict_to_json(obj)
    if isinstance(obj, Kind):
        return obj.value
    if isinstance(obj, BlockVector):
        return vector_to_json(obj)
    if isinstance(obj, (Scalar, complex)):
        return scalar_to_json(obj)
    if isinstance(obj, int):
        # counts, sizes and indices stay JSON integers
        return obj
    if isinstance(obj, Rational):
        return number_to_json(obj)
    if isinstance(obj, float) or hasattr(obj, "dtype"):
        value = float(obj)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")
