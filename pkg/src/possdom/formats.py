"""Text and JSON formats: domain files, witnesses, graphs, reports."""

from __future__ import annotations

import json
from typing import Optional

from .core import AggregatorWitness, AlphabetMismatch, Domain, DomainError, Kind, validate_domain

SCHEMA = 1


class ParseError(DomainError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def parse_domain_text(text: str) -> list:
    """Token rows from the domain file format.

    One evaluation per line as whitespace-separated tokens, ``#`` starts a
    comment, blank lines are skipped, and an optional ``issues: m`` header
    fixes the row width.
    """
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("issues:"):
            if rows or width is not None:
                raise ParseError(lineno, "header must precede all evaluations")
            try:
                width = int(line.split(":", 1)[1])
            except ValueError:
                raise ParseError(lineno, "malformed header, expected 'issues: m'") from None
            if width < 1:
                raise ParseError(lineno, "issue count must be positive")
            continue
        tokens = tuple(line.split())
        if width is None:
            width = len(tokens)
        if len(tokens) != width:
            raise ParseError(lineno, f"evaluation has {len(tokens)} positions, expected {width}")
        rows.append(tokens)
    if not rows:
        raise ParseError(0, "no evaluations in file")
    return rows


def load_domain(path, repair_degenerate: bool = False) -> Domain:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return validate_domain(parse_domain_text(text), repair_degenerate)


def emit_domain(dom: Domain) -> str:
    lines = [f"issues: {dom.m}"]
    lines += [" ".join(str(t) for t in r) for r in dom.rows]
    return "\n".join(lines) + "\n"


def witness_to_json(dom: Domain, w: AggregatorWitness) -> dict:
    tables = []
    for j, t in enumerate(w.tables):
        entries = [
            {"args": [dom.token(j, a) for a in args], "value": dom.token(j, t[args])}
            for args in sorted(t)
        ]
        tables.append({"issue": dom.labels[j], "entries": entries})
    return {"kind": w.kind.value, "arity": w.arity, "tables": tables}


def witness_from_json(dom: Domain, obj: dict) -> AggregatorWitness:
    try:
        arity = int(obj["arity"])
        kind = Kind(obj.get("kind", Kind.GENERIC.value))
        by_label = {t["issue"]: t["entries"] for t in obj["tables"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise AlphabetMismatch(f"malformed witness: {exc}") from None
    if sorted(by_label) != sorted(dom.labels):
        raise AlphabetMismatch(f"witness issues {sorted(by_label)} do not match domain issues {list(dom.labels)}")
    tables = []
    for j, label in enumerate(dom.labels):
        table = {}
        for e in by_label[label]:
            args = tuple(dom.code(j, _token(dom, j, a)) for a in e["args"])
            table[args] = dom.code(j, _token(dom, j, e["value"]))
        tables.append(table)
    return AggregatorWitness(arity, tuple(tables), kind)


def _token(dom: Domain, j: int, tok):
    # JSON turns every token into a string; match by spelling when needed
    if tok in dom.alphabets[j]:
        return tok
    for t in dom.alphabets[j]:
        if str(t) == str(tok):
            return t
    return tok


def graph_to_json(dom: Domain, g) -> dict:
    return {
        "schema": SCHEMA,
        "vertices": [
            {"issue": dom.labels[v.issue], "u": dom.token(v.issue, v.u), "u_prime": dom.token(v.issue, v.v)}
            for v in g.vertices
        ],
        "edges": [list(e) for e in g.edges],
    }


def graph_to_dot(dom: Domain, g) -> str:
    lines = ["digraph H_X {"]
    for i, v in enumerate(g.vertices):
        label = f"{dom.token(v.issue, v.u)}{dom.token(v.issue, v.v)}_{dom.labels[v.issue]}"
        lines.append(f'  {i} [label="{label}"];')
    for a, b in g.edges:
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tristate(flag: Optional[bool]):
    return "unknown" if flag is None else flag


def report_to_json(dom: Domain, cls, extra: Optional[dict] = None) -> dict:
    out = {
        "schema": SCHEMA,
        "framework": cls.framework,
        "issues": dom.m,
        "evaluations": len(dom),
        "dropped_issues": list(dom.dropped),
        "possibility": tristate(cls.is_possibility),
        "uniform": tristate(cls.is_uniform_possibility),
        "totally_blocked": cls.is_totally_blocked,
        "witnesses": [witness_to_json(dom, w) for w in cls.witnesses],
        "stats": {
            "hx_vertices": cls.diagnostics.get("hx_vertices"),
            "hx_edges": cls.diagnostics.get("hx_edges"),
            "scc_count": cls.diagnostics.get("scc_count"),
            "search_nodes": cls.diagnostics.get("search_nodes"),
        },
    }
    if extra:
        out.update(extra)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
