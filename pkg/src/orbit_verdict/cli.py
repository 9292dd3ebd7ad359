"""Command-line front end.

Every subcommand reads a JSON problem file (a path, or ``-`` for standard
input), writes one JSON report to standard output and exits with

* 0 on success,
* 1 when the input is malformed or a requested ``k`` is out of range,
* 2 when a closed form disagrees with the brute-force oracle or an identity
  check fails.

Reports are sorted and contain no timestamps, so exact-mode runs are
byte-for-byte reproducible.  ``--timing`` adds wall-clock seconds.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .averages import (
    brute_force_average,
    classify_average_system,
    eval_average,
    expand_average_system,
    fixed_point,
    h_polynomial,
    unit_average_polynomial,
)
from .errors import DomainError, IdentityViolation, ShapeError
from .gallery import GALLERY
from .iterates import (
    UnitIterateExpansion,
    brute_force_orbit,
    classify_system,
    eval_iterate,
    expand_system,
    float_tolerance,
)
from .jordan import BlockVector, JordanSystem, apply_affine
from .problem import (
    ProblemSpec,
    ProblemError,
    load_problem,
    scalar_to_json,
    segment_to_json,
    to_jsonable,
)
from .property_p import check_contraction, classify_property_p, tail_bound
from .sweep import SweepConfig, identity_sweep, thread_count

__all__ = ["main", "build_parser", "run"]

DEFAULT_FLOAT_TOL = 1e-9


# -- helpers ------------------------------------------------------------------


def _read_problem(path: str) -> ProblemSpec:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ProblemError("problem", f"cannot read {path}: {exc.strerror}") from None
    return load_problem(text)


def _system_json(problem: ProblemSpec) -> dict:
    sys_ = problem.system
    return {
        "scalar_mode": problem.mode,
        "blocks": [{"lambda": scalar_to_json(b.lam), "size": b.size} for b in sys_.blocks],
        "x": sys_.x,
        "c": sys_.c,
        "horizon": problem.horizon,
    }


def _degree(value) -> Optional[int]:
    return None if value == -math.inf else int(value)


def _poly_coeffs(coords) -> list:
    deg = max((len(p.coeffs) for p in coords), default=0)
    return [[p.coefficient(q) for p in coords] for q in range(deg)]


def _iterate_block(i, block, exp, sub) -> dict:
    out = {
        "index": i,
        "lambda": scalar_to_json(block.lam),
        "size": block.size,
        "s": exp.s,
        "t": exp.t,
        "case": sub.case,
        "kind": sub.kind.value,
        "witness": sub.witness,
        "valid_for_k_above": max(exp.s, exp.t),
    }
    if isinstance(exp, UnitIterateExpansion):
        out["l"] = exp.l
        out["B_j"] = [segment_to_json(b) for b in exp.Bseq]
    else:
        out["w"] = exp.w
        out["A_j"] = [segment_to_json(a) for a in exp.A]
        out["B"] = segment_to_json(exp.B)
    return out


def _average_block(i, block, exp, sub) -> dict:
    out = {
        "index": i,
        "lambda": scalar_to_json(block.lam),
        "size": block.size,
        "s": exp.s,
        "t": exp.t,
        "case": sub.case,
        "kind": sub.kind.value,
        "witness": sub.witness,
        "valid_for_k_from": exp.min_k,
    }
    if exp.is_unit:
        polys = unit_average_polynomial(exp)
        out["average_polynomial"] = {
            "degree": _degree(max((p.degree for p in polys), default=-math.inf)),
            "coefficients": _poly_coeffs(polys),
        }
        return out
    out["E"] = segment_to_json(exp.E)
    out["F"] = segment_to_json(exp.F)
    out["A_j"] = [segment_to_json(a) for a in exp.Aavg]
    if exp.lam != 0:
        h = h_polynomial(exp)
        out["H"] = {
            "degree": _degree(h.degree),
            "rule": h.rule,
            "coefficients": _poly_coeffs(h.coords),
        }
    return out


def _flat(v) -> np.ndarray:
    if isinstance(v, BlockVector):
        return np.array([complex(z) for z in v.flat()], dtype=complex)
    return np.asarray(v, dtype=complex)


def _compare(closed: BlockVector, oracle, exact: bool, tol: float) -> tuple:
    """``(agrees, abs_error)``; exact comparisons report error 0 or inf."""
    if exact:
        ok = closed == oracle
        return ok, 0.0 if ok else math.inf
    a, b = _flat(closed), _flat(oracle)
    err = float(np.abs(a - b).max(initial=0.0))
    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    return err <= tol * scale, err


# -- subcommands -------------------------------------------------------------


def cmd_classify_iterates(args, problem: ProblemSpec) -> tuple:
    sys_ = problem.system
    verdict = classify_system(sys_, horizon=problem.horizon)
    exps = expand_system(sys_, float_tolerance(sys_))
    report = {
        "command": "classify-iterates",
        "problem": _system_json(problem),
        "verdict": verdict,
        "blocks": [
            _iterate_block(i, b, e, sub)
            for i, (b, e, sub) in enumerate(zip(sys_.blocks, exps, verdict.blocks))
        ],
    }
    if problem.tail is not None:
        op = problem.tail
        full = classify_property_p(op)
        k = max(problem.horizon, op.tail.N)
        report["property_p"] = {
            "verdict": full,
            "tail": {"kind": op.tail.kind, "r": op.tail.r, "N": op.tail.N,
                     "truncation": op.tail.truncation},
            "contraction_verified": check_contraction(op.tail),
            "tail_bound_at_horizon": tail_bound(op, k=k),
        }
        verdict = full
    return report, f"iterates: {verdict.kind.value}" + (f" ({verdict.witness})" if verdict.witness else "")


def cmd_classify_averages(args, problem: ProblemSpec) -> tuple:
    sys_ = problem.system
    verdict = classify_average_system(sys_, horizon=problem.horizon)
    exps = expand_average_system(sys_, float_tolerance(sys_))
    report = {
        "command": "classify-averages",
        "problem": _system_json(problem),
        "verdict": verdict,
        "blocks": [
            _average_block(i, b, e, sub)
            for i, (b, e, sub) in enumerate(zip(sys_.blocks, exps, verdict.blocks))
        ],
    }
    if problem.tail is not None:
        report["tail_note"] = "the tail orbit converges, so its averages converge; the head decides"
    return report, f"averages: {verdict.kind.value}" + (f" ({verdict.witness})" if verdict.witness else "")


def cmd_closed_form(args, problem: ProblemSpec) -> tuple:
    sys_ = problem.system
    k = args.k
    if k < 1:
        raise ProblemError("--k", f"must be >= 1, got {k}")
    tol = float_tolerance(sys_)
    exps = expand_system(sys_, tol)
    aexps = expand_average_system(sys_, tol)
    for i, (e, a) in enumerate(zip(exps, aexps)):
        need = max(e.s, e.t, a.min_k - 1)
        if k <= need:
            raise ProblemError("--k", f"block {i} needs k > {need}, got {k}")
    iterate = BlockVector(tuple(eval_iterate(e, k) for e in exps))
    average = BlockVector(tuple(eval_average(e, k) for e in aexps))
    exact = sys_.mode == "exact"
    orbit = brute_force_orbit(sys_, k, mode=sys_.mode)
    trace = brute_force_average(sys_, k, mode=sys_.mode)
    if orbit.overflow_step is not None:
        raise ProblemError("--k", f"float orbit overflows at step {orbit.overflow_step}")
    ok_it, err_it = _compare(iterate, orbit.states[k], exact, DEFAULT_FLOAT_TOL)
    ok_av, err_av = _compare(average, trace.averages[k - 1], exact, DEFAULT_FLOAT_TOL)
    if not (ok_it and ok_av):
        which = "iterate" if not ok_it else "average"
        raise IdentityViolation(f"closed-form {which} disagrees with the oracle at k={k}")
    report = {
        "command": "closed-form",
        "problem": _system_json(problem),
        "k": k,
        "iterate": iterate,
        "average": average,
        "oracle_agrees": True,
        "max_abs_error": max(err_it, err_av),
    }
    return report, f"closed form at k={k} agrees with the oracle"


def cmd_fixed_point(args, problem: ProblemSpec) -> tuple:
    sys_ = problem.system
    star = fixed_point(sys_)
    image = apply_affine(sys_, star)
    if sys_.mode == "exact":
        verified = image == star
        residual = 0.0 if verified else math.inf
    else:
        residual = float(np.abs(_flat(image) - _flat(star)).max(initial=0.0))
        verified = residual <= DEFAULT_FLOAT_TOL * (1 + float(np.abs(_flat(star)).max(initial=0.0)))
    if not verified:
        raise IdentityViolation("computed fixed point is not fixed by T")
    report = {
        "command": "fixed-point",
        "problem": _system_json(problem),
        "fixed_point": star,
        "unique": all(b.lam != 1 for b in sys_.blocks),
        "verified": verified,
        "residual": residual,
    }
    return report, "fixed point verified"


def _oracle_iterates(sys_: JordanSystem, K: int, tol: float) -> dict:
    exact = sys_.mode == "exact"
    orbit = brute_force_orbit(sys_, K, mode=sys_.mode)
    exps = expand_system(sys_, float_tolerance(sys_))
    start = max(max(e.s, e.t) for e in exps) + 1
    last = K if orbit.overflow_step is None else orbit.overflow_step - 1
    checked, bad, first, worst = 0, 0, None, 0.0
    for k in range(start, last + 1):
        closed = BlockVector(tuple(eval_iterate(e, k) for e in exps))
        ok, err = _compare(closed, orbit.states[k], exact, tol)
        checked += 1
        worst = max(worst, err)
        if not ok:
            bad += 1
            first = k if first is None else first
    norms = list(orbit.norms)
    return {
        "checked": checked,
        "from_k": start,
        "to_k": last,
        "mismatches": bad,
        "first_mismatch_k": first,
        "max_abs_error": worst,
        "empirical": orbit.empirical,
        "overflow_step": orbit.overflow_step,
        "final_norm": norms[-1],
        "max_norm": max(norms),
    }


def _oracle_averages(sys_: JordanSystem, K: int, tol: float) -> dict:
    exact = sys_.mode == "exact"
    trace = brute_force_average(sys_, K, mode=sys_.mode)
    exps = expand_average_system(sys_, float_tolerance(sys_))
    start = max(e.min_k for e in exps)
    last = len(trace.averages)
    checked, bad, first, worst = 0, 0, None, 0.0
    for k in range(start, last + 1):
        closed = BlockVector(tuple(eval_average(e, k) for e in exps))
        ok, err = _compare(closed, trace.averages[k - 1], exact, tol)
        checked += 1
        worst = max(worst, err)
        if not ok:
            bad += 1
            first = k if first is None else first
    norms = list(trace.norms)
    return {
        "checked": checked,
        "from_k": start,
        "to_k": last,
        "mismatches": bad,
        "first_mismatch_k": first,
        "max_abs_error": worst,
        "empirical": trace.empirical,
        "overflow_step": trace.overflow_step,
        "final_norm": norms[-1] if norms else None,
        "max_norm": max(norms) if norms else None,
    }


def cmd_oracle(args, problem: ProblemSpec) -> tuple:
    sys_ = problem.system
    K = args.max_k
    if K < 1:
        raise ProblemError("--max-k", f"must be >= 1, got {K}")
    exact = sys_.mode == "exact"
    tol = 0.0 if exact else (DEFAULT_FLOAT_TOL if args.tol is None else args.tol)
    if tol < 0:
        raise ProblemError("--tol", f"must be >= 0, got {tol}")
    with ThreadPoolExecutor(max_workers=min(2, thread_count())) as pool:
        it = pool.submit(_oracle_iterates, sys_, K, tol)
        av = pool.submit(_oracle_averages, sys_, K, tol)
        iterates, averages = it.result(), av.result()
    report = {
        "command": "oracle",
        "problem": _system_json(problem),
        "max_k": K,
        "tolerance": tol,
        "iterates": iterates,
        "averages": averages,
        "agrees": iterates["mismatches"] == 0 and averages["mismatches"] == 0,
    }
    summary = (
        f"oracle: {iterates['checked']} iterate and {averages['checked']} average checks, "
        f"{iterates['mismatches'] + averages['mismatches']} mismatches"
    )
    status = 0 if report["agrees"] else 2
    return report, summary, status


def cmd_verify_identities(args, problem=None) -> tuple:
    cfg = SweepConfig(args.max_k, args.max_j, args.trials, args.seed)
    rows = identity_sweep(cfg)
    table = [
        {
            "identity": r.name,
            "grid": r.grid,
            "cases": r.cases,
            "failures": r.failures,
            "status": "pass" if r.passed else "fail",
            "first_failure": r.first_failure,
        }
        for r in rows
    ]
    passed = all(r.passed for r in rows)
    report = {
        "command": "verify-identities",
        "seed": args.seed,
        "config": {"max_k": args.max_k, "max_j": args.max_j, "trials": args.trials},
        "table": table,
        "all_passed": passed,
    }
    lines = [f"{r.name:22s} {r.cases:6d} cases  {'pass' if r.passed else 'FAIL'}" for r in rows]
    return report, "\n".join(lines), 0 if passed else 2


def cmd_gallery(args, problem=None) -> tuple:
    report = GALLERY[args.name]()
    report["command"] = "gallery"
    passed = all(report["checks"].values())
    return report, f"{args.name}: checks {'pass' if passed else 'FAIL'}", 0 if passed else 2


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="human-readable summary on stderr")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")

    parser = argparse.ArgumentParser(
        prog="orbit-verdict",
        description="Closed forms and asymptotic verdicts for affine maps in Jordan form.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_problem(name, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("problem", nargs="?", default="-", help="problem JSON file, or - for stdin")
        return p

    with_problem("classify-iterates", "dichotomy/trichotomy verdict for T^k x")
    with_problem("classify-averages", "verdict for the averages of T^k x")
    p = with_problem("closed-form", "evaluate T^k x and Ave_k at one k, checked by the oracle")
    p.add_argument("--k", type=int, required=True)
    with_problem("fixed-point", "solve T x = x")
    p = with_problem("oracle", "compare closed forms with brute force for k <= max-k")
    p.add_argument("--max-k", type=int, required=True)
    p.add_argument("--tol", type=float, default=None, help="float-mode relative tolerance")
    p = sub.add_parser("verify-identities", help="identity sweep table", parents=[common])
    p.add_argument("--max-k", type=int, default=30)
    p.add_argument("--max-j", type=int, default=10)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("gallery", help="built-in example reports", parents=[common])
    p.add_argument("name", choices=sorted(GALLERY))
    return parser


HANDLERS = {
    "classify-iterates": cmd_classify_iterates,
    "classify-averages": cmd_classify_averages,
    "closed-form": cmd_closed_form,
    "fixed-point": cmd_fixed_point,
    "oracle": cmd_oracle,
    "verify-identities": cmd_verify_identities,
    "gallery": cmd_gallery,
}
NEEDS_PROBLEM = {"classify-iterates", "classify-averages", "closed-form", "fixed-point", "oracle"}


def run(argv: Optional[list] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        thread_count()
        problem = _read_problem(args.problem) if args.command in NEEDS_PROBLEM else None
        result = HANDLERS[args.command](args, problem)
    except (ProblemError, ShapeError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except IdentityViolation as exc:
        print(f"identity violation: {exc}", file=stderr)
        return 2
    report, summary = result[0], result[1]
    status = result[2] if len(result) > 2 else 0
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    stdout.write(json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n")
    if args.verbose:
        print(summary, file=stderr)
    return status


def main() -> None:
    sys.exit(run())
