"""Brute-force ground truth and random domain generation.

The oracles enumerate witness tables directly and never touch the pair graph
or the propagating search in :mod:`possdom.search`. Ternary enumeration
rejects a partial assignment as soon as some row tuple's partial image leaves
the projection of X on the issues assigned so far; nothing else is pruned.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core import AggregatorWitness, Domain, Kind, maj3, validate_domain, xor3

MAX_CANDIDATES = 10 ** 8
MAX_NODES = 10 ** 7


class TooLarge(RuntimeError):
    pass


class GenerationFailed(RuntimeError):
    pass


def _closed(rows: tuple, rowset: frozenset, tables: list, arity: int) -> bool:
    m = len(tables)
    for combo in itertools.product(rows, repeat=arity):
        image = tuple(tables[j][tuple(r[j] for r in combo)] for j in range(m))
        if image not in rowset:
            return False
    return True


def _dictatorial(tables: list, arity: int) -> bool:
    return any(all(v == args[d] for t in tables for args, v in t.items()) for d in range(arity))


def enumerate_binary_aggregators(dom: Domain, limit: int = MAX_CANDIDATES) -> Iterator[AggregatorWitness]:
    """Every binary aggregator of X, dictatorial ones included."""
    entries = [(j, (x, y)) for j, k in enumerate(dom.sizes) for x, y in itertools.permutations(range(k), 2)]
    if 2 ** len(entries) > limit:
        raise TooLarge(f"{2 ** len(entries)} binary candidates exceed {limit}")
    rows = dom.codes
    rowset = frozenset(rows)
    for choice in itertools.product((0, 1), repeat=len(entries)):
        tables = [{(x, x): x for x in range(k)} for k in dom.sizes]
        for (j, args), c in zip(entries, choice):
            tables[j][args] = args[c]
        if _closed(rows, rowset, tables, 2):
            yield AggregatorWitness(2, tuple(tables), Kind.GENERIC)


def oracle_binary_nondictatorial(dom: Domain, limit: int = MAX_CANDIDATES) -> Optional[AggregatorWitness]:
    for w in enumerate_binary_aggregators(dom, limit):
        if not _dictatorial(list(w.tables), 2):
            return w.with_kind(Kind.BINARY)
    return None


def _enumerate_ternary(dom: Domain, slot_of: dict, slot_values: list, max_nodes: int) -> Optional[list]:
    """Depth-first over slots in order; ``slot_of`` maps each table entry to a
    slot index or to ``("fixed", value)``."""
    m = dom.m
    rows = dom.codes
    nslots = len(slot_values)
    prefix_sets = {}

    def proj(issues):
        key = tuple(issues)
        if key not in prefix_sets:
            prefix_sets[key] = {tuple(r[j] for j in key) for r in rows}
        return prefix_sets[key]

    # each row triple is re-checked whenever one of its slots is the latest assigned
    checks = [[] for _ in range(nslots + 1)]
    for combo in itertools.product(rows, repeat=3):
        entries = [(j, (combo[0][j], combo[1][j], combo[2][j])) for j in range(m)]
        slots = [slot_of[e] for e in entries]
        free = sorted({s for s in slots if not isinstance(s, tuple)})
        for upto in free or [-1]:
            checks[upto + 1].append(entries)

    assigned = [None] * nslots

    def value(entry):
        s = slot_of[entry]
        return s[1] if isinstance(s, tuple) else assigned[s]

    def consistent(level: int) -> bool:
        for entries in checks[level]:
            issues = []
            image = []
            for j, args in entries:
                v = value((j, args))
                if v is not None:
                    issues.append(j)
                    image.append(v)
            if tuple(image) not in proj(issues):
                return False
        return True

    if not consistent(0):
        return None
    nodes = 0
    level = 0
    choice = [0] * nslots
    while True:
        if level == nslots:
            break
        if choice[level] >= len(slot_values[level]):
            choice[level] = 0
            assigned[level] = None
            level -= 1
            if level < 0:
                return None
            choice[level] += 1
            continue
        nodes += 1
        if nodes > max_nodes:
            raise TooLarge(f"enumeration exceeded {max_nodes} nodes")
        assigned[level] = slot_values[level][choice[level]]
        if consistent(level + 1):
            level += 1
        else:
            choice[level] += 1
    tables = [dict() for _ in range(m)]
    for (j, args) in slot_of:
        tables[j][args] = value((j, args))
    return tables


def _kind_slots(dom: Domain, kind: Kind):
    slot_of = {}
    values = []
    for j, k in enumerate(dom.sizes):
        for args in itertools.product(range(k), repeat=3):
            distinct = set(args)
            if len(distinct) == 1:
                slot_of[(j, args)] = ("fixed", args[0])
            elif len(distinct) == 3:
                slot_of[(j, args)] = len(values)
                values.append(sorted(distinct))
            elif kind is Kind.MAJORITY:
                slot_of[(j, args)] = ("fixed", maj3(*args))
            elif kind is Kind.MINORITY:
                slot_of[(j, args)] = ("fixed", xor3(*args))
        if kind is Kind.WNU:
            # one shared slot per (repeated x, odd y): f(y,x,x) = f(x,y,x) = f(x,x,y)
            for x, y in itertools.permutations(range(k), 2):
                s = len(values)
                values.append(sorted((x, y)))
                for args in ((y, x, x), (x, y, x), (x, x, y)):
                    slot_of[(j, args)] = s
    # slots ordered by issue first would delay every cross-issue check
    order = sorted(range(len(values)), key=lambda s: min(
        (args, j) for (j, args), v in slot_of.items() if v == s
    ))
    remap = {old: new for new, old in enumerate(order)}
    slot_of = {e: (remap[s] if not isinstance(s, tuple) else s) for e, s in slot_of.items()}
    return slot_of, [values[old] for old in order]


def _oracle_ternary(dom: Domain, kind: Kind, max_nodes: int) -> Optional[AggregatorWitness]:
    slot_of, values = _kind_slots(dom, kind)
    tables = _enumerate_ternary(dom, slot_of, values, max_nodes)
    if tables is None:
        return None
    return AggregatorWitness(3, tuple(tables), kind)


def oracle_majority(dom: Domain, max_nodes: int = MAX_NODES) -> Optional[AggregatorWitness]:
    return _oracle_ternary(dom, Kind.MAJORITY, max_nodes)


def oracle_minority(dom: Domain, max_nodes: int = MAX_NODES) -> Optional[AggregatorWitness]:
    return _oracle_ternary(dom, Kind.MINORITY, max_nodes)


def oracle_wnu(dom: Domain, max_nodes: int = MAX_NODES) -> Optional[AggregatorWitness]:
    return _oracle_ternary(dom, Kind.WNU, max_nodes)


def oracle_possibility(dom: Domain) -> bool:
    """Non-dictatorial aggregation for two or three voters, by enumeration."""
    return (
        oracle_binary_nondictatorial(dom) is not None
        or oracle_majority(dom) is not None
        or oracle_minority(dom) is not None
    )


STRUCTURES = ("uniform-random", "product", "affine-subspace", "blocked-seeking")


@dataclass(frozen=True)
class GenParams:
    m: int
    sizes: tuple = ()
    rows: int = 4
    structure: str = "uniform-random"
    seed: int = 0
    dim: Optional[int] = None
    attempts: int = 1000

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.structure not in STRUCTURES:
            raise ValueError(f"unknown structure {self.structure!r}")
        sizes = self.sizes or (2,) * self.m
        if len(sizes) == 1 and self.m > 1:
            sizes = tuple(sizes) * self.m
        object.__setattr__(self, "sizes", tuple(sizes))
        if len(self.sizes) != self.m or min(self.sizes) < 2:
            raise ValueError("need one alphabet size >= 2 per issue")
        total = 1
        for k in self.sizes:
            total *= k
        if not 2 <= self.rows <= total and self.structure != "affine-subspace":
            raise ValueError(f"row count {self.rows} not in [2, {total}]")


def _random_rows(rng: random.Random, sizes, count: int, attempts: int):
    total = 1
    for k in sizes:
        total *= k
    for _ in range(attempts):
        picks = rng.sample(range(total), count)
        rows = []
        for p in picks:
            row = []
            for k in reversed(sizes):
                p, r = divmod(p, k)
                row.append(r)
            rows.append(tuple(reversed(row)))
        if all(len({r[j] for r in rows}) == k for j, k in enumerate(sizes)):
            return rows
    raise GenerationFailed("could not draw rows covering every alphabet")


def generate(params: GenParams) -> Domain:
    rng = random.Random(params.seed)
    p = params
    if p.structure == "uniform-random":
        return validate_domain(_random_rows(rng, p.sizes, p.rows, p.attempts))
    if p.structure == "product":
        if p.m < 2:
            raise ValueError("a product needs m >= 2")
        m1 = p.m // 2
        s1, s2 = p.sizes[:m1], p.sizes[m1:]
        r1 = min(_count(s1), max(max(s1), round(p.rows ** 0.5)))
        r2 = min(_count(s2), max(max(s2), -(-p.rows // r1)))
        left = _random_rows(rng, s1, r1, p.attempts)
        right = _random_rows(rng, s2, r2, p.attempts)
        return validate_domain([a + b for a in left for b in right])
    if p.structure == "affine-subspace":
        if any(k != 2 for k in p.sizes):
            raise ValueError("affine subspaces need Boolean alphabets")
        dim = p.dim if p.dim is not None else max(1, p.m // 2)
        for _ in range(p.attempts):
            basis = [rng.getrandbits(p.m) for _ in range(dim)]
            span = {0}
            for b in basis:
                span |= {s ^ b for s in span}
            if len(span) != 2 ** dim:
                continue
            rows = sorted(tuple((s >> j) & 1 for j in range(p.m)) for s in span)
            if all(len({r[j] for r in rows}) == 2 for j in range(p.m)):
                return validate_domain(rows)
        raise GenerationFailed("no non-degenerate subspace found")
    # blocked-seeking
    from .hx import is_totally_blocked

    for _ in range(p.attempts):
        try:
            dom = validate_domain(_random_rows(rng, p.sizes, p.rows, 50))
        except GenerationFailed:
            continue
        if is_totally_blocked(dom):
            return dom
    raise GenerationFailed("no totally blocked domain found")


def _count(sizes) -> int:
    total = 1
    for k in sizes:
        total *= k
    return total
