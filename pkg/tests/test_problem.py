from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from orbit_verdict.iterates import classify_system
from orbit_verdict.problem import (
    ProblemError,
    load_problem,
    number_to_json,
    parse_problem,
    scalar_to_json,
    to_jsonable,
)
from orbit_verdict.scalar import Scalar
from orbit_verdict.verdict import Kind

DATA = Path(__file__).parent / "data"


def base(**over):
    data = {"blocks": [{"lambda": "1/2", "size": 1}], "x": [["0"]], "c": [["1"]]}
    data.update(over)
    return data


def test_parse_defaults_and_scalars():
    problem = parse_problem(base())
    assert problem.mode == "exact" and problem.horizon == 1000 and problem.tail is None
    assert problem.system.blocks[0].lam == Scalar("1/2")
    problem = parse_problem(base(blocks=[{"lambda": {"re": "3/5", "im": 4}, "size": 1}]))
    assert problem.system.blocks[0].lam == Scalar("3/5", 4)
    problem = parse_problem({"blocks": [{"lambda": 2, "size": 2}]})
    assert problem.system.x.is_zero() and problem.system.c.is_zero()


def test_float_mode():
    problem = parse_problem(base(scalar_mode="float", x=[[0.25]]))
    assert problem.system.x.segments[0][0] == 0.25 + 0j
    assert problem.system.mode == "float"


@pytest.mark.parametrize(
    "data, path",
    [
        ([], "$"),
        (base(extra=1), "$"),
        (base(scalar_mode="decimal"), "scalar_mode"),
        ({"x": []}, "blocks"),
        (base(blocks=[{"size": 1}]), "blocks[0].lambda"),
        (base(blocks=[{"lambda": "1", "size": 0}]), "blocks[0].size"),
        (base(blocks=[{"lambda": "1/0", "size": 1}]), "blocks[0].lambda"),
        (base(blocks=[{"lambda": True, "size": 1}]), "blocks[0].lambda"),
        (base(x=[["0.5", "1"]]), "x[0]"),
        (base(c=[]), "c"),
        (base(x=[[0.5]]), "x[0][0]"),
        (base(x=[[{"re": "1", "imag": "0"}]]), "x[0][0]"),
        (base(horizon=0), "horizon"),
        (base(tail={"kind": "rotation"}), "tail.kind"),
        (base(tail={"r": "1"}), "tail.r"),
        (base(tail={"N": 0}), "tail.N"),
        (base(tail={"truncation": 2, "x": ["1", "2", "3"]}), "tail.x"),
        (base(tail={"truncation": 2, "weights": ["1/2"]}), "tail.weights"),
    ],
)
def test_errors_carry_field_paths(data, path):
    with pytest.raises(ProblemError) as info:
        parse_problem(data)
    assert info.value.path == path


def test_invalid_json():
    with pytest.raises(ProblemError) as info:
        load_problem("{not json")
    assert info.value.path == "$" and "line 1" in str(info.value)


def test_tail_parsing():
    problem = load_problem((DATA / "with_tail.json").read_text())
    op = problem.tail
    assert op.tail.kind == "shift" and op.tail.truncation == 32
    assert op.x_tail[:3] == (1, -1, Fraction(1, 2)) and op.x_tail[3] == 0
    assert op.is_linear


def test_checked_in_files_parse():
    for name in ("contraction", "example3", "mixed", "rotation_linear", "float_mixed", "with_tail"):
        problem = load_problem((DATA / f"{name}.json").read_text())
        assert problem.system.dim >= 1


def test_serialization_is_exact():
    assert scalar_to_json(Scalar("3/7", -1)) == {"re": "3/7", "im": "-1"}
    assert scalar_to_json(Fraction(1, 3)) == {"re": "1/3", "im": "0"}
    assert scalar_to_json(0.5 + 1j) == {"re": 0.5, "im": 1.0}
    assert number_to_json(Fraction(2, 4)) == "1/2"
    assert number_to_json(Scalar(5)) == "5"
    assert to_jsonable({"a": (1, float("inf")), "b": Kind.BOUNDED, "c": None}) == {
        "a": [1, "inf"],
        "b": "Bounded",
        "c": None,
    }
    assert to_jsonable([Fraction(4, 2), Fraction(1, 2)]) == ["2", "1/2"]
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_verdict_round_trips_through_json():
    problem = parse_problem(base())
    out = to_jsonable(classify_system(problem.system))
    again = json.loads(json.dumps(out))
    assert again["kind"] == "ConvergesToConstant"
    assert again["limit"] == [[{"re": "2", "im": "0"}]]
    assert again["blocks"][0]["case"].startswith("Case 4")
