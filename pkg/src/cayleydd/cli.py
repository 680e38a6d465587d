"""``cayleydd`` command line.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 infeasible
request (Moore bound, degree, memory budget).  Group specs and generator lists
are inline JSON or ``@path`` to a JSON file.  Output never uses colour, so
``NO_COLOR`` is honoured trivially.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cayley, records, search
from .errors import (
    BadParameter,
    CayleyError,
    DistanceOverflow,
    InfeasibleDegree,
    MemoryBudgetExceeded,
    MooreInfeasible,
    RetryBudgetExhausted,
)
from .groups import validate

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
DEFAULT_VERIFY_BUDGET = 2_500_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _json_arg(text: str, what: str):
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {what} file: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None


def _group_and_gens(args):
    try:
        group = validate(_json_arg(args.group, "--group"))
    except BadParameter as exc:
        raise UsageError(f"--group: {exc}") from None
    except CayleyError as exc:
        raise UsageError(f"--group: {type(exc).__name__}: {exc}") from None
    raw = _json_arg(args.gens, "--gens")
    if not isinstance(raw, list) or not all(isinstance(g, list) for g in raw):
        raise UsageError("--gens must be a JSON list of integer lists")
    try:
        gens = cayley.close_under_inverses(group, raw)
    except CayleyError as exc:
        raise UsageError(f"--gens: {type(exc).__name__}: {exc}") from None
    return group, gens


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _record_key(text: str) -> tuple:
    try:
        d, k = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--record expects DELTA,D, got {text!r}") from None
    return d, k


def cmd_verify(args) -> int:
    if not args.all and args.record is None:
        raise UsageError("verify needs --all or --record DELTA,D")
    entries = records.load_records()
    if args.record is not None:
        key = _record_key(args.record)
        entries = [e for e in entries if e.key == key]
        if not entries:
            raise UsageError(f"no record for {args.record}")
    summary = records.verify_all(entries, max_order=args.max_order, threads=args.threads)
    if args.json:
        _emit(summary.to_json())
    else:
        print(summary.table())
    return summary.exit_code


def cmd_bfs(args) -> int:
    group, gens = _group_and_gens(args)
    stats = cayley.bfs_stats(group, gens, max_order=args.max_order)
    if args.json:
        _emit({"group": group.to_json(), "generators": gens.to_json(), **stats.to_json()})
    else:
        print(f"group      {group.name}")
        print(f"order      {stats.order}")
        print(f"degree     {stats.degree}")
        print(f"diameter   {stats.diameter if stats.connected else 'unreachable'}")
        print(f"connected  {stats.connected} ({stats.reached} reached)")
        print("histogram  " + " ".join(str(c) for c in stats.distance_histogram))
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        group = validate(_json_arg(args.group, "--group"))
        config = search.SearchConfig(
            group, args.delta, args.target_diameter, args.trials, args.seed, args.max_hits
        )
    except BadParameter as exc:
        raise UsageError(str(exc)) from None
    except CayleyError as exc:
        raise UsageError(f"--group: {type(exc).__name__}: {exc}") from None
    result = search.random_search(config, threads=args.threads)
    if args.json:
        _emit(result.to_json())
    else:
        print(f"group {group.name}, order {group.order}, delta {args.delta}, target D {args.target_diameter}")
        for h in result.hits:
            print(f"trial {h.trial_index:>6}  diameter {h.stats.diameter}  generators {h.generators.to_json()}")
        print(
            f"trials {result.trials_run}, connected {result.connected}, "
            f"best diameter {result.best_diameter}, hits {len(result.hits)}"
        )
    return EXIT_OK


def cmd_moore(args) -> int:
    try:
        value = search.moore_bound(args.delta, args.diameter)
    except BadParameter as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _emit({"delta": args.delta, "diameter": args.diameter, "moore_bound": value,
               "exceeds_int64": search.exceeds_int64(value)})
    else:
        print(value)
    return EXIT_OK


def cmd_export(args) -> int:
    group, gens = _group_and_gens(args)
    edges = cayley.export_graph(group, gens, args.format, args.out)
    print(f"wrote {group.order} vertices, {edges} edges to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_records_dump(args) -> int:
    text = records.embedded_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cayleydd", description="Cayley graphs of semidirect products for the degree/diameter problem.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="re-verify the embedded record graphs")
    v.add_argument("--all", action="store_true")
    v.add_argument("--record", metavar="DELTA,D")
    v.add_argument("--max-order", type=int, default=DEFAULT_VERIFY_BUDGET)
    v.add_argument("--json", action="store_true")
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bfs", help="degree/diameter of one Cayley graph")
    b.add_argument("--group", required=True)
    b.add_argument("--gens", required=True)
    b.add_argument("--max-order", type=int, default=cayley.DEFAULT_MAX_ORDER)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bfs)

    s = sub.add_parser("search", help="seeded random generator-set search")
    s.add_argument("--group", required=True)
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--target-diameter", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-hits", type=int, default=10)
    s.add_argument("--json", action="store_true")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_search)

    mo = sub.add_parser("moore", help="Moore bound for (delta, D)")
    mo.add_argument("--delta", type=int, required=True)
    mo.add_argument("--diameter", type=int, required=True)
    mo.add_argument("--json", action="store_true")
    mo.set_defaults(func=cmd_moore)

    e = sub.add_parser("export", help="write the graph as an edge list or DIMACS file")
    e.add_argument("--group", required=True)
    e.add_argument("--gens", required=True)
    e.add_argument("--format", choices=("edgelist", "dimacs"), required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)

    r = sub.add_parser("records-dump", help="print the embedded record dataset")
    r.add_argument("--out")
    r.set_defaults(func=cmd_records_dump)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (MooreInfeasible, InfeasibleDegree, MemoryBudgetExceeded, DistanceOverflow, RetryBudgetExhausted) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CayleyError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
