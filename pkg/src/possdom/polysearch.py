"""Aggregators as polymorphisms of the sorted (disjoint union) relation.

Issue ``j``'s positions become elements ``(x, j)`` of one universe, and each
row of X becomes a tuple of tagged elements. A conservative polymorphism of
that relation never mixes sorts on a column, so only same-sort tables are
stored; cross-sort behaviour is a fixed rule and never faces a constraint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple, Optional

from .core import (
    AggregatorWitness,
    Domain,
    Kind,
    WitnessError,
    check_kind,
    maj3,
    verify_aggregator,
    xor3,
)
from .search import DEFAULT_BUDGET, SearchStats, conservative_values, solve_tables


class NotConservative(WitnessError):
    pass


class NotPolymorphism(WitnessError):
    def __init__(self, rows):
        self.rows = rows
        super().__init__(f"image of rows {rows} is not in the relation")


class WrongKind(WitnessError):
    pass


class NotBooleanFramework(ValueError):
    pass


class DomainMismatch(ValueError):
    pass


class Tagged(NamedTuple):
    value: int
    sort: int


@dataclass(frozen=True)
class SortedRelation:
    domain: Domain
    universe: tuple
    rows: tuple

    def sort_of(self, a: Tagged) -> int:
        return a.sort


def encode_disjoint_union(dom: Domain) -> SortedRelation:
    universe = tuple(Tagged(x, j) for j in range(dom.m) for x in range(dom.size(j)))
    rows = tuple(tuple(Tagged(x, j) for j, x in enumerate(r)) for r in dom.codes)
    return SortedRelation(dom, universe, rows)


def polymorphism_to_aggregator(sr: SortedRelation, f: Mapping, kind: Kind = Kind.GENERIC) -> AggregatorWitness:
    """Untag a same-sort operation table into per-issue tables and check it."""
    dom = sr.domain
    arity = len(next(iter(f)))
    tables = [dict() for _ in range(dom.m)]
    for j in range(dom.m):
        for args in itertools.product(range(dom.size(j)), repeat=arity):
            out = f[tuple(Tagged(a, j) for a in args)]
            if out.sort != j or out.value not in args:
                raise NotConservative(f"f{args} in sort {j} gives {out}")
            tables[j][args] = out.value
    w = AggregatorWitness(arity, tuple(tables), Kind(kind))
    verdict = verify_aggregator(dom, w)
    if not verdict:
        raise NotPolymorphism(verdict.rows)
    return w


@dataclass(frozen=True)
class SortedOperation:
    """A ternary operation on the whole universe built from an aggregator."""

    witness: AggregatorWitness

    def __call__(self, a: Tagged, b: Tagged, c: Tagged) -> Tagged:
        if a.sort == b.sort == c.sort:
            return Tagged(self.witness.tables[a.sort][(a.value, b.value, c.value)], a.sort)
        if a == b or b == c or a == c:
            rule = maj3 if self.witness.kind is Kind.MAJORITY else xor3
            return rule(a, b, c)
        return a

    def same_sort_table(self, sr: SortedRelation) -> dict:
        out = {}
        for j in range(sr.domain.m):
            elems = [Tagged(x, j) for x in range(sr.domain.size(j))]
            for args in itertools.product(elems, repeat=3):
                out[args] = self(*args)
        return out


def aggregator_to_polymorphism(w: AggregatorWitness) -> SortedOperation:
    if w.kind not in (Kind.MAJORITY, Kind.MINORITY):
        raise WrongKind(f"expected a majority or minority witness, got {w.kind.value}")
    return SortedOperation(w)


@dataclass(frozen=True)
class TernaryTable:
    """Sort-local ternary tables ``tables[j][(x, y, z)]`` over codes."""

    tables: tuple

    @classmethod
    def from_ops(cls, sizes, op: Callable) -> "TernaryTable":
        return cls(
            tuple({t: op(*t) for t in itertools.product(range(k), repeat=3)} for k in sizes)
        )

    @classmethod
    def lift_binary(cls, tables) -> "TernaryTable":
        # f'(x, y, z) = g(g(x, y), z)
        out = []
        for g in tables:
            k = round(len(g) ** 0.5)
            out.append({(x, y, z): g[(g[(x, y)], z)] for x, y, z in itertools.product(range(k), repeat=3)})
        return cls(tuple(out))

    @property
    def sizes(self) -> tuple:
        return tuple(round(len(t) ** (1 / 3)) for t in self.tables)

    def restrict(self, j: int, pair) -> dict:
        return {args: self.tables[j][args] for args in itertools.product(pair, repeat=3)}

    def tagged(self) -> dict:
        return {
            tuple(Tagged(a, j) for a in args): Tagged(v, j)
            for j, t in enumerate(self.tables)
            for args, v in t.items()
        }


def diamond(f: TernaryTable, g: TernaryTable) -> TernaryTable:
    """``(f <> g)(x, y, z) = f(g(x, y, z), g(y, z, x), g(z, x, y))`` per sort."""
    if len(f.tables) != len(g.tables) or any(a.keys() != b.keys() for a, b in zip(f.tables, g.tables)):
        raise DomainMismatch("tables are over different domains")
    out = []
    for ft, gt in zip(f.tables, g.tables):
        out.append({(x, y, z): ft[(gt[(x, y, z)], gt[(y, z, x)], gt[(z, x, y)])] for (x, y, z) in gt})
    return TernaryTable(tuple(out))


def _witness(dom: Domain, tables, arity: int, kind: Kind) -> AggregatorWitness:
    w = AggregatorWitness(arity, tuple(tables), kind)
    assert verify_aggregator(dom, w), f"{kind.value} search returned a non-aggregator"
    return w


def _ternary_domains(dom: Domain, forced_rule: Callable) -> dict:
    domains = {}
    for j, k in enumerate(dom.sizes):
        for args in itertools.product(range(k), repeat=3):
            if len(set(args)) < 3:
                domains[(j, args)] = (forced_rule(*args),)
            else:
                domains[(j, args)] = conservative_values(args)
    return domains


def find_majority_aggregator(
    dom: Domain, budget: int = DEFAULT_BUDGET, stats: Optional[SearchStats] = None
) -> Optional[AggregatorWitness]:
    tables = solve_tables(dom, 3, _ternary_domains(dom, maj3), budget, stats)
    if tables is None:
        return None
    w = _witness(dom, tables, 3, Kind.MAJORITY)
    assert check_kind(dom, w, Kind.MAJORITY)
    return w


def find_minority_aggregator(
    dom: Domain, budget: int = DEFAULT_BUDGET, stats: Optional[SearchStats] = None
) -> Optional[AggregatorWitness]:
    tables = solve_tables(dom, 3, _ternary_domains(dom, xor3), budget, stats)
    if tables is None:
        return None
    w = _witness(dom, tables, 3, Kind.MINORITY)
    assert check_kind(dom, w, Kind.MINORITY)
    return w


def componentwise(dom: Domain, op: Callable, kind: Kind) -> AggregatorWitness:
    return AggregatorWitness(3, TernaryTable.from_ops(dom.sizes, op).tables, kind)


def is_affine_boolean(dom: Domain) -> bool:
    """Closure of X under componentwise ``x ^ y ^ z`` (Boolean framework only).

    Checked as: the translate ``{x ^ x0}`` of X is closed under xor.
    """
    if not dom.is_boolean:
        raise NotBooleanFramework("every issue must have exactly two positions")
    masks = [sum(bit << j for j, bit in enumerate(r)) for r in dom.codes]
    x0 = masks[0]
    shifted = {x ^ x0 for x in masks}
    vecs = sorted(shifted)
    return all(a ^ b in shifted for i, a in enumerate(vecs) for b in vecs[i + 1:])


class PairResult(NamedTuple):
    behaviour: str  # "and", "or", "maj" or "xor"
    table: TernaryTable


def _and(x, y):
    return min(x, y)


def _or(x, y):
    return max(x, y)


def find_pair_polymorphism(
    sr: SortedRelation,
    j: int,
    pair,
    budget: int = DEFAULT_BUDGET,
    stats: Optional[SearchStats] = None,
) -> Optional[PairResult]:
    """Conservative polymorphism whose restriction to ``pair`` (two positions
    of issue ``j``) is and/or (binary, lifted to ternary), maj or xor.

    The smaller code of the pair plays the role of 0.
    """
    dom = sr.domain
    a, b = sorted(pair)
    if a == b or not 0 <= a < dom.size(j) or not 0 <= b < dom.size(j):
        raise ValueError(f"{pair} is not a two-element subset of issue {dom.labels[j]}")
    stats = stats if stats is not None else SearchStats()
    start = stats.nodes
    B = {a, b}

    def remaining() -> int:
        return budget - (stats.nodes - start)

    for name, rule in (("and", _and), ("or", _or)):
        domains = {}
        for s, k in enumerate(dom.sizes):
            for args in itertools.product(range(k), repeat=2):
                if s == j and set(args) == B:
                    domains[(s, args)] = (rule(*args),)
                else:
                    domains[(s, args)] = conservative_values(args)
        tables = solve_tables(dom, 2, domains, remaining(), stats)
        if tables is not None:
            return PairResult(name, TernaryTable.lift_binary(tables))

    for name, rule in (("maj", maj3), ("xor", xor3)):
        domains = {}
        for s, k in enumerate(dom.sizes):
            for args in itertools.product(range(k), repeat=3):
                if s == j and set(args) <= B:
                    domains[(s, args)] = (rule(*args),)
                else:
                    domains[(s, args)] = conservative_values(args)
        tables = solve_tables(dom, 3, domains, remaining(), stats)
        if tables is not None:
            return PairResult(name, TernaryTable(tables))
    return None


def two_element_subsets(dom: Domain):
    for j, k in enumerate(dom.sizes):
        for pair in itertools.combinations(range(k), 2):
            yield j, pair


def find_wnu_aggregator(
    dom: Domain, budget: int = DEFAULT_BUDGET, stats: Optional[SearchStats] = None
) -> Optional[AggregatorWitness]:
    """Ternary weak near-unanimity aggregator, or None.

    One polymorphism per two-element subset of each issue, folded
    right to left with :func:`diamond`.
    """
    stats = stats if stats is not None else SearchStats()
    start = stats.nodes
    sr = encode_disjoint_union(dom)
    found = []
    for j, pair in two_element_subsets(dom):
        res = find_pair_polymorphism(sr, j, pair, budget - (stats.nodes - start), stats)
        if res is None:
            return None
        found.append(res.table)
    h = found[-1]
    for f in reversed(found[:-1]):
        h = diamond(f, h)
    w = polymorphism_to_aggregator(sr, h.tagged(), Kind.WNU)
    assert check_kind(dom, w, Kind.WNU), "diamond fold is not weak near-unanimity"
    return w
