"""Command-line interface.

Exit codes for verdict commands: 0 yes, 1 no, 2 undecided (search budget or
oracle size guard), 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .classify import classify_possibility, classify_uniform, full_report
from .core import DomainError, WitnessError, check_kind, is_dictatorial, verify_aggregator, Kind
from .formats import (
    SCHEMA,
    dumps,
    emit_domain,
    graph_to_dot,
    graph_to_json,
    load_domain,
    report_to_json,
    tristate,
    witness_from_json,
    witness_to_json,
)
from .hx import build_hx, is_totally_blocked
from .oracle import (
    STRUCTURES,
    GenerationFailed,
    GenParams,
    TooLarge,
    generate,
    oracle_binary_nondictatorial,
    oracle_majority,
    oracle_minority,
    oracle_wnu,
)
from .search import DEFAULT_BUDGET

YES, NO, UNDECIDED, BAD_INPUT = 0, 1, 2, 3


def _exit_for(flag) -> int:
    if flag is None:
        return UNDECIDED
    return YES if flag else NO


def _load(args):
    return load_domain(args.path, args.repair_degenerate)


def _print_text(lines, out) -> None:
    out.write("\n".join(lines) + "\n")


def cmd_classify(args, out) -> int:
    dom = _load(args)
    t0 = time.perf_counter()
    cls = full_report(dom, args.budget)
    extra = {"elapsed_seconds": round(time.perf_counter() - t0, 6)} if args.stats_timing else None
    if args.format == "json":
        out.write(dumps(report_to_json(dom, cls, extra)))
    else:
        lines = [
            f"framework: {cls.framework}",
            f"possibility domain: {tristate(cls.is_possibility)}",
            f"uniform possibility domain: {tristate(cls.is_uniform_possibility)}",
            f"totally blocked: {cls.is_totally_blocked}",
            "witnesses: " + (", ".join(w.kind.value for w in cls.witnesses) or "none"),
        ]
        if dom.dropped:
            lines.append("dropped issues: " + " ".join(map(str, dom.dropped)))
        _print_text(lines, out)
    return _exit_for(cls.is_possibility)


def cmd_uniform(args, out) -> int:
    dom = _load(args)
    t0 = time.perf_counter()
    uni = classify_uniform(dom, args.budget)
    if args.format == "json":
        obj = {
            "schema": SCHEMA,
            "uniform": tristate(uni.is_uniform_possibility),
            "witnesses": [witness_to_json(dom, uni.witness)] if uni.witness is not None else [],
            "stats": {"search_nodes": uni.stats["search_nodes"]},
        }
        if args.stats_timing:
            obj["elapsed_seconds"] = round(time.perf_counter() - t0, 6)
        out.write(dumps(obj))
    else:
        _print_text([f"uniform possibility domain: {tristate(uni.is_uniform_possibility)}"], out)
    return _exit_for(uni.is_uniform_possibility)


def cmd_blocked(args, out) -> int:
    dom = _load(args)
    blocked = is_totally_blocked(dom)
    if args.format == "json":
        out.write(dumps({"schema": SCHEMA, "totally_blocked": blocked}))
    else:
        _print_text(["blocked" if blocked else "not blocked"], out)
    return YES if blocked else NO


def cmd_graph(args, out) -> int:
    dom = _load(args)
    g = build_hx(dom)
    out.write(graph_to_dot(dom, g) if args.dot else dumps(graph_to_json(dom, g)))
    return YES


def cmd_verify(args, out) -> int:
    dom = _load(args)
    with open(args.witness, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise WitnessError(f"{args.witness}: not JSON ({exc})") from None
    items = obj["witnesses"] if isinstance(obj, dict) and "witnesses" in obj else [obj]
    status = YES
    results = []
    for item in items:
        w = witness_from_json(dom, item)
        verdict = verify_aggregator(dom, w)
        res = {"kind": w.kind.value, "ok": verdict.ok}
        if not verdict:
            if verdict.rows is not None:
                res["violation"] = {"reason": verdict.reason, "rows": [list(r) for r in verdict.rows]}
            else:
                j = verdict.issue
                res["violation"] = {
                    "reason": verdict.reason,
                    "issue": dom.labels[j],
                    "args": [dom.token(j, a) for a in verdict.args],
                }
        elif w.kind in (Kind.BINARY, Kind.MAJORITY, Kind.MINORITY, Kind.WNU):
            kv = check_kind(dom, w, w.kind)
            if not kv:
                res["ok"] = False
                res["violation"] = {"reason": kv.reason}
        res["dictator"] = is_dictatorial(dom, w) if res["ok"] else None
        if not res["ok"]:
            status = NO
        results.append(res)
    if args.format == "json":
        out.write(dumps({"schema": SCHEMA, "results": results}))
    else:
        for res in results:
            if res["ok"]:
                _print_text([f"{res['kind']}: ok"], out)
            else:
                _print_text([f"{res['kind']}: violation {json.dumps(res['violation'])}"], out)
    return status


def cmd_oracle(args, out) -> int:
    dom = _load(args)
    found = {}
    try:
        for name, fn in (
            ("binary", oracle_binary_nondictatorial),
            ("majority", oracle_majority),
            ("minority", oracle_minority),
            ("wnu", oracle_wnu),
        ):
            found[name] = fn(dom)
    except TooLarge as exc:
        sys.stderr.write(f"oracle refused: {exc}\n")
        return UNDECIDED
    possible = any(found[k] is not None for k in ("binary", "majority", "minority"))
    if args.format == "json":
        out.write(dumps({
            "schema": SCHEMA,
            "possibility": possible,
            "uniform": found["wnu"] is not None,
            "witnesses": [witness_to_json(dom, w) for w in found.values() if w is not None],
        }))
    else:
        for name, w in found.items():
            _print_text([f"{name}: {'found' if w is not None else 'none'}"], out)
    return YES if possible else NO


def cmd_gen(args, out) -> int:
    sizes = tuple(args.sizes) if args.sizes else ()
    try:
        params = GenParams(
            m=args.m, sizes=sizes, rows=args.rows, structure=args.structure, seed=args.seed, dim=args.dim
        )
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return BAD_INPUT
    try:
        dom = generate(params)
    except GenerationFailed as exc:
        sys.stderr.write(f"error: {exc}\n")
        return NO
    out.write(emit_domain(dom))
    return YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="possdom",
        description="Decide possibility, uniform possibility and total blockedness of a domain of evaluations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def domain_cmd(name, help_text, func, budget=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("path", help="domain file")
        p.add_argument("--repair-degenerate", action="store_true", help="drop issues with a single position")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json")
        fmt.add_argument("--text", dest="format", action="store_const", const="text")
        p.set_defaults(format="json", func=func)
        if budget:
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                           help=f"search node limit (default {DEFAULT_BUDGET})")
            p.add_argument("--stats-timing", action="store_true", help="include wall-clock time in JSON")
        return p

    domain_cmd("classify", "full report; exit 0 possibility, 1 impossibility", cmd_classify, budget=True)
    domain_cmd("uniform", "uniform possibility; exit 0 yes, 1 no", cmd_uniform, budget=True)
    domain_cmd("blocked", "total blockedness; exit 0 blocked, 1 not blocked", cmd_blocked)
    g = domain_cmd("graph", "dump the pair graph as JSON or DOT", cmd_graph)
    g.add_argument("--dot", action="store_true")
    v = domain_cmd("verify", "check a witness JSON file; exit 0 ok, 1 violation", cmd_verify)
    v.add_argument("witness", help="witness JSON (single witness or a report)")
    domain_cmd("oracle", "brute-force cross-check", cmd_oracle)

    gen = sub.add_parser("gen", help="generate a random domain file")
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--sizes", type=int, nargs="+", help="alphabet size per issue (one value repeats)")
    gen.add_argument("--rows", type=int, default=4)
    gen.add_argument("--structure", choices=STRUCTURES, default="uniform-random")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--dim", type=int)
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (OSError, DomainError, WitnessError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
