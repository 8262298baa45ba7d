"""Backtracking search for per-issue function tables that preserve X.

Variables are table entries ``(j, args)``; each has a finite set of allowed
values (a singleton for forced entries). Every n-tuple of rows yields one
constraint: the componentwise image must be a row of X. Constraints are
table constraints over X and are kept arc consistent while searching.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Optional

from .core import Domain

DEFAULT_BUDGET = 10_000_000


class BudgetExhausted(RuntimeError):
    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search budget exhausted after {nodes} nodes")


@dataclass
class SearchStats:
    nodes: int = 0
    searches: int = 0


def conservative_values(args: tuple) -> tuple:
    return tuple(sorted(set(args)))


def solve_tables(
    dom: Domain,
    arity: int,
    domains: dict,
    budget: int = DEFAULT_BUDGET,
    stats: Optional[SearchStats] = None,
) -> Optional[tuple]:
    """Find tables with ``tables[j][args] in domains[(j, args)]`` preserving X.

    ``domains`` must cover every entry of every ``X_j^arity``. Returns a tuple
    of per-issue dicts, or None when no such tables exist. Raises
    :class:`BudgetExhausted` after ``budget`` branching nodes.
    """
    stats = stats if stats is not None else SearchStats()
    stats.searches += 1
    m = dom.m
    rows = dom.codes

    scopes = {}
    for combo in itertools.product(rows, repeat=arity):
        scope = tuple((j, tuple(r[j] for r in combo)) for j in range(m))
        scopes.setdefault(scope, None)
    scopes = list(scopes)
    watch = {var: [] for var in domains}
    for c, scope in enumerate(scopes):
        for var in scope:
            watch[var].append(c)

    start = stats.nodes

    def revise(c: int, doms: dict) -> Optional[list]:
        scope = scopes[c]
        cur = [doms[var] for var in scope]
        support = [set() for _ in range(m)]
        for row in rows:
            if all(row[j] in cur[j] for j in range(m)):
                for j in range(m):
                    support[j].add(row[j])
        changed = []
        for j, var in enumerate(scope):
            if len(support[j]) < len(cur[j]):
                if not support[j]:
                    return None
                doms[var] = frozenset(support[j])
                changed.append(var)
        return changed

    def propagate(doms: dict, queue: list) -> bool:
        pending = set(queue)
        while queue:
            c = queue.pop()
            pending.discard(c)
            changed = revise(c, doms)
            if changed is None:
                return False
            for var in changed:
                for c2 in watch[var]:
                    if c2 not in pending:
                        pending.add(c2)
                        queue.append(c2)
        return True

    def search(doms: dict) -> Optional[dict]:
        best = None
        for var in order:
            size = len(doms[var])
            if size > 1 and (best is None or size < len(doms[best])):
                best = var
                if size == 2:
                    break
        if best is None:
            return doms
        for value in sorted(doms[best]):
            stats.nodes += 1
            if stats.nodes - start > budget:
                raise BudgetExhausted(stats.nodes - start)
            child = dict(doms)
            child[best] = frozenset((value,))
            if propagate(child, list(watch[best])):
                found = search(child)
                if found is not None:
                    return found
        return None

    order = sorted(domains)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 2 * len(order) + 200))
    doms = {var: frozenset(vals) for var, vals in domains.items()}
    if any(not d for d in doms.values()):
        return None
    if not propagate(doms, list(range(len(scopes)))):
        return None
    found = search(doms)
    if found is None:
        return None
    tables = [dict() for _ in range(m)]
    for (j, args), vals in found.items():
        (tables[j][args],) = vals
    return tuple(tables)
