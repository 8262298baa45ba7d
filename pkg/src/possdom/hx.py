"""The pair graph H_X and binary non-dictatorial aggregators.

Vertices are ordered pairs ``(u, u')`` of distinct positions of one issue.
There is an edge ``(k, u, u') -> (l, v, v')`` for ``k != l`` when some rows
``z, z'`` with ``z_k = u, z_l = v, z'_k = u', z'_l = v'`` admit no row ``y``
with ``y_k = u``, ``y_l = v'`` and ``y_i in {z_i, z'_i}`` for every issue.

X admits a binary non-dictatorial aggregator exactly when this graph is not
strongly connected; a forward-edge-free vertex bipartition yields one.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import AggregatorWitness, Domain, Kind, check_kind, verify_aggregator


class SameIssue(ValueError):
    pass


class HxVertex(NamedTuple):
    issue: int
    u: int
    v: int


@dataclass(frozen=True)
class HxGraph:
    vertices: tuple
    succ: tuple  # succ[i]: sorted tuple of successor indices

    @property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def edges(self) -> list:
        return [(i, j) for i, out in enumerate(self.succ) for j in out]

    def __len__(self) -> int:
        return len(self.vertices)


def hx_vertices(dom: Domain) -> tuple:
    return tuple(
        HxVertex(j, u, v)
        for j in range(dom.m)
        for u, v in itertools.permutations(range(dom.size(j)), 2)
    )


def has_edge(dom: Domain, a: HxVertex, b: HxVertex) -> bool:
    """Edge test straight from the definition (scans rows directly)."""
    k, u, u2 = a
    l, v, v2 = b
    if k == l:
        raise SameIssue(f"both vertices belong to issue {dom.labels[k]}")
    rows = dom.codes
    for z in rows:
        if z[k] != u or z[l] != v:
            continue
        for z2 in rows:
            if z2[k] != u2 or z2[l] != v2:
                continue
            blocked = any(
                y[k] == u and y[l] == v2 and all(yi == zi or yi == zi2 for yi, zi, zi2 in zip(y, z, z2))
                for y in rows
            )
            if not blocked:
                return True
    return False


def build_hx(dom: Domain) -> HxGraph:
    """Construct H_X.

    For each ordered issue pair ``(k, l)`` rows are bucketed by their
    ``(k, l)`` values, so candidate ``z``, ``z'`` and blockers ``y`` come from
    three buckets. Blockers are found from pairwise row agreement bitmasks:
    ``y`` blocks ``(z, z')`` when the masks of ``(y, z)`` and ``(y, z')`` cover
    every issue.
    """
    vertices = hx_vertices(dom)
    index = {v: i for i, v in enumerate(vertices)}
    X = dom.array()
    agree = _agreement_masks(X)
    succ = defaultdict(set)
    for k, l in itertools.permutations(range(dom.m), 2):
        buckets = defaultdict(list)
        for r, row in enumerate(dom.codes):
            buckets[(row[k], row[l])].append(r)
        buckets = {key: np.array(idx) for key, idx in buckets.items()}
        for (u, v), zs in buckets.items():
            for (u2, v2), zs2 in buckets.items():
                if u == u2 or v == v2:
                    continue
                src = index[HxVertex(k, u, u2)]
                dst = index[HxVertex(l, v, v2)]
                if dst in succ[src]:
                    continue
                ys = buckets.get((u, v2))
                if ys is None:
                    succ[src].add(dst)
                elif agree is not None:
                    if _some_pair_unblocked_masks(agree, (1 << dom.m) - 1, zs, zs2, ys):
                        succ[src].add(dst)
                elif _some_pair_unblocked(X, zs, zs2, ys):
                    succ[src].add(dst)
    return HxGraph(vertices, tuple(tuple(sorted(succ[i])) for i in range(len(vertices))))


def _agreement_masks(X) -> Optional[np.ndarray]:
    # agree[y, z] has bit i set when rows y and z share position i
    n, m = X.shape
    if m > 62 or n > 4000:
        return None
    agree = np.zeros((n, n), dtype=np.int64)
    for i in range(m):
        col = X[:, i]
        agree |= (col[:, None] == col[None, :]).astype(np.int64) << i
    return agree


def _some_pair_unblocked_masks(agree, full, zs, zs2, ys) -> bool:
    a = agree[np.ix_(ys, zs)][:, :, None]
    b = agree[np.ix_(ys, zs2)][:, None, :]
    blocked = ((a | b) == full).any(axis=0)
    return not blocked.all()


def _some_pair_unblocked(X, zs, zs2, ys) -> bool:
    Y = X[ys][None, :, :]
    Z2 = X[zs2][:, None, :]
    for z in zs:
        ok = (Y == X[z]) | (Y == Z2)
        blocked = ok.all(axis=2).any(axis=1)
        if not blocked.all():
            return True
    return False


@dataclass(frozen=True)
class SccResult:
    """``labels[i]`` is the component of vertex ``i``; ids follow a topological
    order of the condensation (sources first)."""

    labels: tuple
    count: int


def strongly_connected_components(g: HxGraph) -> SccResult:
    # iterative Tarjan; components are emitted sinks first
    n = len(g.vertices)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    emitted = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            out = g.succ[v]
            recurse = False
            while pos < len(out):
                w = out[pos]
                pos += 1
                if index[w] == -1:
                    work.append((v, pos))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                emitted.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    labels = [0] * n
    count = len(emitted)
    for i, comp in enumerate(emitted):
        for w in comp:
            labels[w] = count - 1 - i
    return SccResult(tuple(labels), count)


def reachable(g: HxGraph, start: int) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in g.succ[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def ancestors(g: HxGraph, target: int) -> set:
    pred = [[] for _ in g.vertices]
    for i, out in enumerate(g.succ):
        for j in out:
            pred[j].append(i)
    seen = {target}
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for w in pred[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def forward_free_partition(g: HxGraph) -> Optional[tuple]:
    """Pick ``(V1, V2)`` with no edge from V1 into V2, or None if strongly connected.

    The target ``b`` is the second vertex of the first ordered pair ``(a, b)``
    with no path from ``a`` to ``b``; V2 is the set of ancestors of ``b``.
    """
    n = len(g.vertices)
    for a in range(n):
        reach = reachable(g, a)
        if len(reach) == n:
            continue
        b = next(i for i in range(n) if i not in reach)
        v2 = ancestors(g, b)
        v1 = set(range(n)) - v2
        assert not any(j in v2 for i in v1 for j in g.succ[i]), "edge from V1 into V2"
        return frozenset(v1), frozenset(v2)
    return None


def witness_from_partition(dom: Domain, g: HxGraph, v2: frozenset) -> AggregatorWitness:
    """``f_j(x, x') = x`` if vertex ``(j, x, x')`` lies in V1, else ``x'``."""
    tables = [dict() for _ in range(dom.m)]
    for j in range(dom.m):
        for x in range(dom.size(j)):
            tables[j][(x, x)] = x
    for i, (j, x, x2) in enumerate(g.vertices):
        tables[j][(x, x2)] = x2 if i in v2 else x
    return AggregatorWitness(2, tuple(tables), Kind.BINARY)


def find_binary_nondictatorial(dom: Domain, graph: Optional[HxGraph] = None) -> Optional[AggregatorWitness]:
    g = build_hx(dom) if graph is None else graph
    part = forward_free_partition(g)
    if part is None:
        return None
    w = witness_from_partition(dom, g, part[1])
    assert verify_aggregator(dom, w), "partition witness is not an aggregator"
    assert check_kind(dom, w, Kind.BINARY), "partition witness is dictatorial"
    return w


def is_totally_blocked(dom: Domain, graph: Optional[HxGraph] = None) -> bool:
    g = build_hx(dom) if graph is None else graph
    return strongly_connected_components(g).count == 1
