"""Command-line front end.

Exit codes: 0 success or every requested condition holds, 1 a negative
domain verdict (validation violation, failed condition, unmet start,
no convergence, failed theorem conclusion), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import conditions as cond
from .errors import FixpointError, PointError, StartConditionError
from .instance import InstanceFormatError, load_instance
from .maps import validate_map
from .oracle import (
    DEFAULT_DISTANCE_GRID,
    MAP_KINDS,
    RandomInstanceSpec,
    append_archive,
    enumerate_cfp,
    separation_bound,
    stress_theorem,
)
from .solver import iterate
from .spaces import validate_metric, validate_order

SEED_ENV = "OPM_FIXPOINT_SEED"
CONDITION_ORDER = ("mixed-monotone", "classical", "new", "remark")
_CHECKERS = {
    "mixed-monotone": cond.is_mixed_monotone,
    "classical": cond.check_classical_condition,
    "new": cond.check_new_condition,
    "remark": cond.check_remark_ratio,
}

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _load(path):
    try:
        return load_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except InstanceFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _validation(inst):
    sections = {}
    if inst.backend == "finite":
        sections["metric"] = validate_metric(inst.space)
        sections["order"] = validate_order(inst.space)
    sections["map"] = validate_map(inst.map, inst.space)
    return sections


def _validation_text(sections) -> str:
    lines = []
    for name, rep in sections.items():
        if rep.ok:
            lines.append(f"{name}: ok")
            continue
        lines.append(f"{name}: {len(rep.violations)} violation(s)")
        for v in rep.violations:
            wit = ", ".join(str(w) for w in v.witness)
            lines.append(f"  {v.axiom} ({wit}) {v.detail}".rstrip())
    return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:g}"
    if isinstance(v, tuple):
        return "(" + ", ".join(_fmt(c) for c in v) + ")"
    return str(v)


def _report_text(name: str, rep: cond.ConditionReport) -> str:
    scope = "exhaustive" if rep.exhaustive else "sampled, not exhaustive"
    if rep.condition == cond.CLASSICAL_K:
        head = (
            f"{name}: holds with minimal_k = {_fmt(rep.minimal_k)}"
            if rep.holds else f"{name}: infeasible, minimal_k = {_fmt(rep.minimal_k)}"
        )
    else:
        head = f"{name}: {'holds' if rep.holds else 'FAILS'}"
    head += f" ({rep.quadruples_checked} checks, {scope})"
    lines = [head]
    w = rep.worst_violation
    if w is not None:
        args = ", ".join(_fmt(a) for a in w.args)
        kind = f" [{w.kind}]" if w.kind else ""
        lines.append(f"  worst violation{kind}: ({args}) lhs = {_fmt(w.lhs)}, rhs = {_fmt(w.rhs)}")
    for k, v in rep.details.items():
        lines.append(f"  {k}: {_fmt(v)}")
    return "\n".join(lines)


def cmd_validate(args) -> int:
    inst = _load(args.file)
    sections = _validation(inst)
    ok = all(r.ok for r in sections.values())
    payload = {"command": "validate", "ok": ok, **{k: r.to_dict() for k, r in sections.items()}}
    _emit(args, payload, _validation_text(sections))
    return OK if ok else NEGATIVE


def cmd_check(args) -> int:
    inst = _load(args.file)
    sections = _validation(inst)
    if not all(r.ok for r in sections.values()):
        payload = {"command": "check", "ok": False, "validation": {k: r.to_dict() for k, r in sections.items()}}
        _emit(args, payload, "instance does not validate\n" + _validation_text(sections))
        return NEGATIVE
    names = CONDITION_ORDER if args.condition == "all" else (args.condition,)
    kwargs = {} if inst.backend == "finite" else {"grid": inst.grid}
    try:
        reports = [(n, _CHECKERS[n](inst.map, inst.space, **kwargs)) for n in names]
    except FixpointError as exc:
        _emit(args, {"command": "check", "ok": False, "error": str(exc)}, f"error: {exc}")
        return NEGATIVE
    ok = all(r.holds for _, r in reports)
    payload = {"command": "check", "ok": ok, "reports": [r.to_dict() for _, r in reports]}
    _emit(args, payload, "\n".join(_report_text(n, r) for n, r in reports))
    return OK if ok else NEGATIVE


def _parse_point(raw: str, space):
    if space.backend == "finite":
        return space.check_point(raw)
    try:
        return space.check_point(tuple(float(c) for c in raw.split(",")))
    except ValueError:
        raise PointError(f"cannot read {raw!r} as a comma-separated vector") from None


def cmd_solve(args) -> int:
    inst = _load(args.file)
    start = list(inst.start) if inst.start is not None else [None, None]
    try:
        if args.x0 is not None:
            start[0] = _parse_point(args.x0, inst.space)
        if args.y0 is not None:
            start[1] = _parse_point(args.y0, inst.space)
        if None in start:
            raise UsageError("a start pair is required (instance 'start' or --x0/--y0)")
        for p in start:
            inst.space.check_point(p)
    except PointError as exc:
        raise UsageError(str(exc)) from exc
    tol = inst.tol if args.tol is None else args.tol
    max_iter = inst.max_iter if args.max_iter is None else args.max_iter
    if tol <= 0 or max_iter < 1:
        raise UsageError("--tol must be positive and --max-iter at least 1")

    sections = _validation(inst)
    if not all(r.ok for r in sections.values()):
        _emit(args, {"command": "solve", "ok": False, "validation": {k: r.to_dict() for k, r in sections.items()}},
              "instance does not validate\n" + _validation_text(sections))
        return NEGATIVE
    try:
        trace = iterate(inst.map, inst.space, start[0], start[1], tol=tol, max_iter=max_iter,
                        allow_unmet_start=args.allow_unmet_start)
    except StartConditionError as exc:
        _emit(args, {"command": "solve", "ok": False, "start_failed": list(exc.failed)},
              "start condition unmet: " + "; ".join(exc.failed))
        return NEGATIVE
    except FixpointError as exc:
        _emit(args, {"command": "solve", "ok": False, "error": str(exc)}, f"error: {exc}")
        return NEGATIVE

    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            json.dump(trace.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    ok = trace.converged
    summary = {
        "command": "solve",
        "ok": ok,
        "verdict": trace.verdict,
        "iterations": trace.iterations,
        "limit": trace.to_dict()["limit"],
        "period": trace.period,
        "hypothesis_met": trace.hypothesis_met,
        "limit_is_fixed": trace.limit_is_fixed,
    }
    lines = [f"verdict: {trace.verdict}", f"iterations: {trace.iterations}"]
    if trace.limit is not None:
        lines.append(f"limit: ({_fmt(trace.limit[0])}, {_fmt(trace.limit[1])})")
    if trace.period is not None:
        lines.append(f"period: {trace.period}")
    if not trace.hypothesis_met:
        lines.append("note: hypothesis unmet (start condition overridden)")
    if args.verbose:
        lines.append(trace.to_text())
    _emit(args, summary, "\n".join(lines))
    return OK if ok else NEGATIVE


def cmd_enumerate(args) -> int:
    inst = _load(args.file)
    if inst.backend != "finite":
        raise UsageError("enumerate requires finite backend")
    sections = _validation(inst)
    if not all(r.ok for r in sections.values()):
        _emit(args, {"command": "enumerate", "ok": False, "validation": {k: r.to_dict() for k, r in sections.items()}},
              "instance does not validate\n" + _validation_text(sections))
        return NEGATIVE
    cfps = enumerate_cfp(inst.map, inst.space)
    sep = separation_bound(cfps, inst.space)
    lines = [f"coupled fixed points ({len(cfps)}):"]
    lines += [f"  ({x}, {y})" for x, y in cfps]
    if sep.vacuous:
        lines.append("separation: vacuous (fewer than 2 fixed points)")
    else:
        (x, y), (u, v) = sep.pair
        lines.append(
            f"separation: minimum {_fmt(sep.minimum)} at ({x}, {y}) vs ({u}, {v}); "
            f">= 1/4: {'yes' if sep.holds else 'no'}"
        )
    payload = {"command": "enumerate", "ok": sep.holds, **cfps.to_dict(), "separation": sep.to_dict()}
    _emit(args, payload, "\n".join(lines))
    return OK if sep.holds else NEGATIVE


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def cmd_search(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    grid = DEFAULT_DISTANCE_GRID
    if args.distance_grid:
        try:
            grid = tuple(float(v) for v in args.distance_grid.split(","))
        except ValueError:
            raise UsageError(f"cannot read --distance-grid {args.distance_grid!r}") from None
    try:
        spec = RandomInstanceSpec(
            n=args.n, distance_grid=grid, order_density=args.density, seed=seed, map_kind=args.map_kind
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    summary = stress_theorem(spec, args.count)
    if args.archive and summary.failures:
        append_archive(args.archive, summary.failures)
    payload = {"command": "search", "ok": not summary.failures, "spec": spec.to_dict(), **summary.to_dict()}
    _emit(args, payload, summary.to_text())
    return OK if not summary.failures else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS,
                     help="output format (default: text)")

    parser = argparse.ArgumentParser(
        prog="opm-fixpoint",
        description="Coupled fixed points of mixed monotone maps on partially ordered metric spaces.",
        parents=[fmt],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[fmt], help="check the metric, order and map of an instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", parents=[fmt], help="check contractive and monotonicity conditions")
    p.add_argument("file")
    p.add_argument("--condition", choices=CONDITION_ORDER + ("all",), default="all")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", parents=[fmt], help="run the coupled iteration")
    p.add_argument("file")
    p.add_argument("--x0")
    p.add_argument("--y0")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--allow-unmet-start", action="store_true")
    p.add_argument("--trace-out", metavar="FILE")
    p.add_argument("-v", "--verbose", action="store_true", help="print the full trace table")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate", parents=[fmt], help="list coupled fixed points (finite spaces)")
    p.add_argument("file")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("search", parents=[fmt], help="stress the theorem on random finite instances")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--density", type=float, default=0.5, help="order edge probability")
    p.add_argument("--map-kind", choices=MAP_KINDS, default="monotone")
    p.add_argument("--distance-grid", help="comma-separated distance values")
    p.add_argument("--archive", metavar="FILE", help="append conclusion failures as JSON lines")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if not hasattr(args, "format"):
        args.format = "text"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"opm-fixpoint {args.command}: error: {exc}", file=sys.stderr)
        return USAGE
