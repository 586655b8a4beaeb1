"""Command-line front end: compute preclusion numbers, build matchings,
and verify the closed-form predictions over grid families.

Reports are JSON by default (schema key "gridmp/1"), with CSV (one optimal
set per row) and plain text as alternatives.  Exit codes: 0 success, 1
theorem mismatch or failed self-check, 2 usage error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import __version__
from . import constructions as cons
from . import matching as mt
from . import preclusion as pc
from .errors import BudgetError, GridmpError, SearchLimitError, ValidationError
from .grid import build_grid, format_dims, format_vertex, parse_dims, parse_edge, parse_vertex

SCHEMA = "gridmp/1"

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _budget_info(args) -> tuple[int, dict]:
    import os
    if args.budget is not None:
        return args.budget, {"limit": args.budget, "source": "flag"}
    limit = pc.default_budget()
    source = "env" if os.environ.get("GRIDMP_BUDGET") else "default"
    return limit, {"limit": limit, "source": source}


def _classification_payload(tag: pc.Classification) -> dict:
    out: dict = {"kind": tag.kind.value}
    if tag.vertex is not None:
        out["vertex"] = format_vertex(tag.vertex)
    if tag.offset is not None:
        out["offset"] = tag.offset
        out["axis"] = tag.axis
    return out


def _set_payload(faults, tag) -> dict:
    return {"edges": faults.encode(), "classification": _classification_payload(tag)}


def _result_payload(res: pc.MpResult, include_sets: bool) -> dict:
    out = {
        "mp": res.mp,
        "predicted_mp": res.predicted_mp,
        "prediction_match": res.prediction_match,
        "super_matched": res.super_matched,
        "optimal_set_count": len(res.optimal_sets),
    }
    if res.mismatches:
        out["mismatches"] = list(res.mismatches)
    if include_sets:
        out["optimal_sets"] = [
            _set_payload(s, t) for s, t in zip(res.optimal_sets, res.classifications)
        ]
    counts: dict[str, int] = {}
    for t in res.classifications:
        counts[t.kind.value] = counts.get(t.kind.value, 0) + 1
    out["classification_counts"] = counts
    return out


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _emit(report: dict, fmt: str, rows_fn) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2))
    elif fmt == "csv":
        header, rows = rows_fn()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_cell(v) for v in row] for row in rows)
        sys.stdout.write(buf.getvalue())
    else:
        for line in _text_lines(report):
            print(line)


def _text_lines(report: dict) -> list[str]:
    lines = [f"gridmp {report['command']} ({SCHEMA})"]
    for key, value in report.items():
        if key in ("schema", "version", "command"):
            continue
        lines.append(f"{key}: {json.dumps(value)}")
    return lines


# -- mp --------------------------------------------------------------------

def cmd_mp(args) -> int:
    started = time.perf_counter()
    budget, budget_info = _budget_info(args)
    dims = parse_dims(args.dims)
    grid = build_grid(dims)
    enumerate_sets = args.enumerate or args.classify

    mp = pc.brute_force_mp(grid, budget=budget)
    predicted = pc.predicted_mp(grid)
    result: dict = {"mp": mp, "predicted_mp": predicted, "match": mp == predicted}
    sets: list = []
    tags: list = []
    if enumerate_sets:
        sets = pc.enumerate_optimal_sets(grid, budget=budget, mp=mp)
        tags = [pc.classify_set(grid, s) for s in sets]
        result["optimal_set_count"] = len(sets)
        if args.enumerate:
            result["optimal_sets"] = [_set_payload(s, t) for s, t in zip(sets, tags)]
        if args.classify:
            counts: dict[str, int] = {}
            for t in tags:
                counts[t.kind.value] = counts.get(t.kind.value, 0) + 1
            result["classification_counts"] = counts

    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": "mp",
        "options": {"dims": args.dims, "enumerate": args.enumerate,
                    "classify": args.classify, "format": args.format},
        "budget": budget_info,
        "result": result,
        "runtime_ms": int((time.perf_counter() - started) * 1000),
    }

    def rows():
        header = ["dims", "mp", "predicted_mp", "match", "set_index", "kind",
                  "vertex", "offset", "axis", "edges"]
        body = []
        if sets:
            for idx, (s, t) in enumerate(zip(sets, tags)):
                body.append([args.dims, mp, predicted, mp == predicted, idx,
                             t.kind.value,
                             format_vertex(t.vertex) if t.vertex else "",
                             "" if t.offset is None else t.offset,
                             "" if t.axis is None else t.axis,
                             ";".join(s.encode())])
        else:
            body.append([args.dims, mp, predicted, mp == predicted,
                         "", "", "", "", "", ""])
        return header, body

    _emit(report, args.format, rows)
    return EXIT_OK if mp == predicted else EXIT_MISMATCH


# -- construct -------------------------------------------------------------

def _run_construction(args):
    grid = build_grid(parse_dims(args.dims))
    kind = args.kind
    if kind == "pm":
        if args.position is None:
            raise ValidationError("construct pm needs --position")
        m = cons.canonical_pm(grid, args.position)
        check = m.is_perfect
    elif kind == "apm-alleven":
        u = _need_vertex(args)
        m = cons.apm_all_even(grid, u)
        check = m.is_almost_perfect and m.uncovered() == {u}
    elif kind == "apm-evensum":
        u = _need_vertex(args)
        m = cons.apm_even_sum(grid, u)
        check = m.is_almost_perfect and m.uncovered() == {u}
    elif kind == "apm-avoid":
        if args.avoid is None:
            raise ValidationError("construct apm-avoid needs --avoid")
        f = parse_edge(args.avoid)
        m = cons.apm_avoiding_edge(grid, f)
        check = m.is_almost_perfect and f not in m
    else:  # pm-minus-vertex
        u = _need_vertex(args)
        deleted = [grid.edge_id(parse_edge(e)) for e in args.delete]
        m = cons.pm_of_vertex_deleted(grid, u, deleted)
        check = (m.uncovered() == {u}
                 and not (m.ids & set(deleted)))
    check = check and mt.is_matching(grid, m.ids)
    return grid, m, check


def _need_vertex(args):
    if args.uncover is None:
        raise ValidationError(f"construct {args.kind} needs --uncover")
    return parse_vertex(args.uncover)


def cmd_construct(args) -> int:
    started = time.perf_counter()
    grid, m, check = _run_construction(args)
    uncovered = sorted(m.uncovered(), key=grid.index_of)
    result = {
        "edges": m.encode(),
        "size": len(m.ids),
        "uncovered": [format_vertex(v) for v in uncovered],
        "self_check": "pass" if check else "fail",
    }
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": "construct",
        "options": {"kind": args.kind, "dims": args.dims,
                    "position": args.position, "uncover": args.uncover,
                    "avoid": args.avoid, "delete": list(args.delete),
                    "format": args.format},
        "result": result,
        "runtime_ms": int((time.perf_counter() - started) * 1000),
    }

    def rows():
        header = ["kind", "dims", "size", "self_check", "uncovered", "edges"]
        return header, [[args.kind, args.dims, len(m.ids), result["self_check"],
                         ";".join(result["uncovered"]), ";".join(result["edges"])]]

    _emit(report, args.format, rows)
    return EXIT_OK if check else EXIT_MISMATCH


# -- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    started = time.perf_counter()
    budget, budget_info = _budget_info(args)
    if args.family:
        with open(args.family, "r", encoding="utf-8") as fh:
            grids = pc.parse_family(fh.read())
    else:
        grids = [build_grid(parse_dims(args.dims))]

    items = pc.sweep(grids, budget=budget, jobs=args.jobs)
    grid_payloads = []
    matched = mismatched = skipped = failed = 0
    for item in items:
        payload: dict = {"dims": format_dims(item.dims)}
        if item.result is not None:
            payload["status"] = "ok"
            payload.update(_result_payload(item.result, include_sets=True))
            if item.result.prediction_match:
                matched += 1
            else:
                mismatched += 1
        elif item.skipped:
            payload["status"] = "skipped"
            payload["error"] = item.error
            skipped += 1
        else:
            payload["status"] = "failed"
            payload["error"] = item.error
            failed += 1
        grid_payloads.append(payload)

    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": "verify",
        "options": {"dims": args.dims, "family": args.family,
                    "jobs": args.jobs, "format": args.format},
        "budget": budget_info,
        "grids": grid_payloads,
        "summary": {"total": len(items), "matched": matched,
                    "mismatched": mismatched, "skipped": skipped,
                    "failed": failed},
        "runtime_ms": int((time.perf_counter() - started) * 1000),
    }

    def rows():
        header = ["dims", "status", "mp", "predicted_mp", "prediction_match",
                  "super_matched", "set_index", "kind", "vertex", "offset",
                  "axis", "edges"]
        body = []
        for item in items:
            d = format_dims(item.dims)
            if item.result is None:
                status = "skipped" if item.skipped else "failed"
                body.append([d, status] + [""] * 10)
                continue
            res = item.result
            base = [d, "ok", res.mp, res.predicted_mp, res.prediction_match,
                    res.super_matched]
            if not res.optimal_sets:
                body.append(base + [""] * 6)
            for idx, (s, t) in enumerate(zip(res.optimal_sets, res.classifications)):
                body.append(base + [idx, t.kind.value,
                                    format_vertex(t.vertex) if t.vertex else "",
                                    "" if t.offset is None else t.offset,
                                    "" if t.axis is None else t.axis,
                                    ";".join(s.encode())])
        return header, body

    _emit(report, args.format, rows)
    if mismatched or failed:
        return EXIT_MISMATCH
    if skipped:
        return EXIT_BUDGET
    return EXIT_OK


# -- entry point -----------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridmp",
        description="Matching preclusion of grid graphs: brute force, "
                    "constructions, and theorem checks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--budget", type=int, default=None,
                       help="max subset count per search size (default 10^8; "
                            "GRIDMP_BUDGET overrides)")
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default="json")

    p_mp = sub.add_parser("mp", help="compute the preclusion number")
    p_mp.add_argument("--dims", required=True, help="grid dims, e.g. 6,3")
    p_mp.add_argument("--enumerate", action="store_true",
                      help="list all optimal preclusion sets")
    p_mp.add_argument("--classify", action="store_true",
                      help="tally optimal sets per classification")
    add_common(p_mp)
    p_mp.set_defaults(func=cmd_mp)

    p_c = sub.add_parser("construct", help="build one of the explicit matchings")
    p_c.add_argument("kind", choices=("pm", "apm-alleven", "apm-evensum",
                                      "apm-avoid", "pm-minus-vertex"))
    p_c.add_argument("--dims", required=True)
    p_c.add_argument("--position", type=int, default=None,
                     help="pairing position for pm")
    p_c.add_argument("--uncover", default=None,
                     help="vertex to leave uncovered, e.g. 1,1")
    p_c.add_argument("--avoid", default=None,
                     help="edge to avoid for apm-avoid, e.g. 0,0|1,0")
    p_c.add_argument("--delete", action="append", default=[],
                     help="faulty edge for pm-minus-vertex (repeatable)")
    p_c.add_argument("--format", choices=("json", "csv", "text"),
                     default="json")
    p_c.set_defaults(func=cmd_construct)

    p_v = sub.add_parser("verify", help="check predictions over grids")
    group = p_v.add_mutually_exclusive_group(required=True)
    group.add_argument("--dims", default=None)
    group.add_argument("--family", default=None,
                       help="file with one dims per line; # comments")
    p_v.add_argument("--jobs", type=int, default=1,
                     help="parallel verification processes")
    add_common(p_v)
    p_v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses exit code 2 for usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SearchLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GridmpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
