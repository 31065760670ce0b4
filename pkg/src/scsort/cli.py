"""Command-line interface: ``scsort <command> ...``.

Exit codes: 0 success or passing check, 1 failed verification, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Sequence

from . import dynamics, search
from .dynamics import BoundViolation
from .machine import parse_spec, run
from .patterns import Mode, Pattern, enumerate_av, parse_pattern, parse_patterns
from .perm_core import CapacityError, InvalidInput, parse_perm, reverse

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = ("theorem1", "dstat", "claim", "bound", "census")


class UsageError(Exception):
    pass


def _fmt_perm(p) -> str:
    return " ".join(map(str, p))


def _sigma(text: str):
    pat = parse_pattern(text, Mode.CONSECUTIVE)
    if pat.mode is not Mode.CONSECUTIVE:
        raise UsageError(f"--sigma must be a consecutive pattern, got {text!r}")
    return tuple(pat.perm)


def _emit_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def cmd_sort(args) -> int:
    pi, spec = parse_perm(args.perm), parse_spec(args.map)
    out = run(pi, spec).output
    if args.format == "json":
        print(json.dumps({"input": list(pi), "spec": str(spec), "output": list(out)}))
    elif args.format == "csv":
        print(_emit_csv(["input", "spec", "output"], [[_fmt_perm(pi), str(spec), _fmt_perm(out)]]))
    else:
        print(_fmt_perm(out))
    return EXIT_OK


def cmd_trace(args) -> int:
    trace = run(parse_perm(args.perm), parse_spec(args.map))
    if args.format == "json":
        print(json.dumps(trace.to_json()))
    elif args.format == "csv":
        rows = []
        for e in trace.events:
            cls = trace.pop_class[e.value] if e.action == "pop" else ""
            snap = _fmt_perm(trace.f_snapshots[e.value]) if e.action == "pop" else ""
            rows.append([e.step, e.action, e.value, cls, snap])
        print(_emit_csv(["step", "action", "value", "pop_class", "f_snapshot"], rows))
    else:
        print(f"input  {_fmt_perm(trace.input)}   map {trace.spec}")
        for e in trace.events:
            line = f"{e.step:4d} {e.action:4s} {e.value}"
            if e.action == "pop":
                line += f"  [{trace.pop_class[e.value]}]  f = {_fmt_perm(trace.f_snapshots[e.value])}"
            print(line)
        print(f"output {_fmt_perm(trace.output)}")
        print(f"pre-popped  {_fmt_perm(sorted(trace.pre_popped))}")
        print(f"post-popped {_fmt_perm(sorted(trace.post_popped))}")
    return EXIT_OK


def cmd_orbit(args) -> int:
    pi, sigma = parse_perm(args.perm), _sigma(args.sigma)
    target = [Pattern.consecutive(sigma), Pattern.consecutive(reverse(sigma))]
    res = dynamics.orbit(pi, sigma, target=target, max_iter=args.max_iter)
    if args.format == "json":
        print(json.dumps(res.to_json()))
    elif args.format == "csv":
        print(_emit_csv(["t", "perm"], [[t, _fmt_perm(p)] for t, p in enumerate(res.iterates)]))
    else:
        print(f"   {_fmt_perm(res.iterates[0])}")
        for p in res.iterates[1:]:
            print(f"-> {_fmt_perm(p)}")
        print(f"hit_time {res.hit_time}")
        if res.truncated:
            print(f"no repeat within {args.max_iter} passes")
        else:
            print(f"cycle_start {res.cycle_start} cycle_length {res.cycle_length}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite == "census":
        if not args.patterns:
            raise UsageError("census needs --patterns")
        rep = dynamics.census_multi(args.n, parse_patterns(args.patterns))
    elif args.suite == "theorem1":
        rep = dynamics.verify_theorem_1(args.n, _sigma(args.sigma))
    elif args.suite == "dstat":
        rep = dynamics.verify_d_decrease(args.n)
    elif args.suite == "claim":
        rep = dynamics.verify_claim_adjacent12(args.n)
    else:
        rep = dynamics.verify_bound(args.n)
    doc = rep.to_json()
    if args.format == "json":
        print(json.dumps(doc))
    elif args.format == "csv":
        print(_emit_csv(["check", "n", "sigma", "pass", "violations"],
                        [[rep.check, rep.n, rep.sigma, rep.passed, len(rep.violations)]]))
    else:
        status = "PASS" if rep.passed else "FAIL"
        print(f"{rep.check} n={rep.n} sigma={rep.sigma}: {status}")
        for k, v in doc["stats"].items():
            print(f"  {k}: {json.dumps(v)}")
        for v in doc["violations"][:20]:
            print(f"  violation: {json.dumps(v)}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_search(args) -> int:
    sigma = Pattern.consecutive(_sigma(args.sigma))
    if args.samples is not None:
        if args.seed is None:
            raise UsageError("sampled search needs an explicit --seed")
        include = [parse_perm(t) for t in args.include]
        rec = search.sampled_search(args.n, sigma, args.samples, args.seed, include)
        records = [rec] if rec is not None else []
        max_steps = rec.steps if rec is not None else None
        complete = True
        if args.records and records:
            search.write_records(args.records, records)
    else:
        res = search.exhaustive_search(
            args.n, sigma, workers=args.workers, checkpoint_path=args.checkpoint,
            records_path=args.records, chunk_size=args.chunk_size,
            witness_limit=args.witness_limit, stop_after_chunks=args.max_chunks)
        records, max_steps, complete = res.records, res.max_steps, res.complete
    if args.format == "json":
        print(json.dumps({"n": args.n, "sigma": str(sigma), "max_steps": max_steps,
                          "complete": complete, "records": [r.to_json() for r in records]}))
    elif args.format == "csv":
        print(_emit_csv(["n", "sigma", "perm", "steps", "discovered_at"],
                        [[r.n, r.sigma, _fmt_perm(r.perm), r.steps, r.discovered_at]
                         for r in records]))
    else:
        state = "" if complete else " (partial; resume with the same --checkpoint)"
        print(f"n={args.n} sigma={sigma}: max {max_steps}{state}")
        for r in records:
            print(f"  {_fmt_perm(r.perm)}  steps={r.steps}  at={r.discovered_at}")
    return EXIT_OK


def cmd_count(args) -> int:
    ps = parse_patterns(args.patterns, Mode.CONSECUTIVE)
    count = len(enumerate_av(args.n, ps))
    pats = ",".join(map(str, ps))
    if args.format == "json":
        print(json.dumps({"n": args.n, "patterns": pats, "count": count}))
    elif args.format == "csv":
        print(_emit_csv(["n", "patterns", "count"], [[args.n, pats, count]]))
    else:
        print(count)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scsort", description="Pattern-avoiding stack-sorting maps and their dynamics.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("human", "json", "csv"), default="human")
        p.set_defaults(func=func)
        return p

    p = add("sort", cmd_sort, "apply one machine pass")
    p.add_argument("--perm", required=True)
    p.add_argument("--map", required=True, help="west | sc:<perm> | s:<perm> | scb:<perm>+<perm>")

    p = add("trace", cmd_trace, "full event log of one pass")
    p.add_argument("--perm", required=True)
    p.add_argument("--map", required=True)

    p = add("orbit", cmd_orbit, "iterate SC_sigma until a state repeats")
    p.add_argument("--perm", required=True)
    p.add_argument("--sigma", default="231")
    p.add_argument("--max-iter", type=int, default=10_000)

    p = add("verify", cmd_verify, "run an exhaustive check over S_n")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", default="231")
    p.add_argument("--patterns", help="census only, e.g. c:231,c:321")

    p = add("search", cmd_search, "maximum sorting time over S_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", default="231")
    p.add_argument("--workers", type=int, default=None,
                   help=f"default from ${search.WORKERS_ENV}, else 1")
    p.add_argument("--checkpoint")
    p.add_argument("--records", help="JSON Lines output")
    p.add_argument("--chunk-size", type=int, default=search.CHUNK_SIZE)
    p.add_argument("--witness-limit", type=int, default=search.WITNESS_LIMIT)
    p.add_argument("--max-chunks", type=int, default=None, help="stop after this many chunks")
    p.add_argument("--samples", type=int, default=None, help="sampled mode: number of draws")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--include", action="append", default=[],
                   help="sampled mode: permutation to evaluate first (repeatable)")

    p = add("count", cmd_count, "size of Av_n(patterns)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--patterns", required=True, help="e.g. p:132,p:231")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, InvalidInput, CapacityError, search.IntegrityError) as exc:
        print(f"scsort {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundViolation as exc:
        print(f"scsort {args.command}: bound violated: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
