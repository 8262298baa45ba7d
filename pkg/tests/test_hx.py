import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from possdom import hx
from possdom.core import Kind, check_kind, validate_domain, verify_aggregator, DegenerateIssue
from possdom.hx import (
    HxGraph,
    HxVertex,
    SameIssue,
    build_hx,
    find_binary_nondictatorial,
    forward_free_partition,
    has_edge,
    is_totally_blocked,
    strongly_connected_components,
)
from possdom.oracle import enumerate_binary_aggregators, oracle_binary_nondictatorial

from conftest import random_small_domains


def literal_edges(dom):
    g_vertices = hx.hx_vertices(dom)
    return {
        (i, j)
        for i, a in enumerate(g_vertices)
        for j, b in enumerate(g_vertices)
        if a.issue != b.issue and has_edge(dom, a, b)
    }


def to_nx(g):
    G = nx.DiGraph()
    G.add_nodes_from(range(len(g)))
    G.add_edges_from(g.edges)
    return G


small_rows = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 2)), min_size=2, max_size=9, unique=True
)


def domain_or_none(rows):
    try:
        return validate_domain(rows)
    except DegenerateIssue:
        return None


class TestHasEdge:
    def test_implication_examples(self, implication):
        assert has_edge(implication, HxVertex(0, 1, 0), HxVertex(1, 1, 0))
        assert not has_edge(implication, HxVertex(0, 0, 1), HxVertex(1, 0, 1))
        assert not has_edge(implication, HxVertex(0, 0, 1), HxVertex(1, 1, 0))

    def test_same_issue(self, implication):
        with pytest.raises(SameIssue):
            has_edge(implication, HxVertex(0, 0, 1), HxVertex(0, 1, 0))


class TestBuild:
    def test_implication(self, implication):
        g = build_hx(implication)
        assert g.vertices == (HxVertex(0, 0, 1), HxVertex(0, 1, 0), HxVertex(1, 0, 1), HxVertex(1, 1, 0))
        assert set(g.edges) == literal_edges(implication) == {(1, 3), (2, 0)}

    def test_cube_has_no_edges(self, cube2):
        g = build_hx(cube2)
        assert len(g) == 4
        assert g.edges == []

    def test_one_in_three_strongly_connected(self, one_in_three):
        g = build_hx(one_in_three)
        # three Boolean issues, two ordered pairs each
        assert len(g) == 6
        assert nx.is_strongly_connected(to_nx(g))
        assert strongly_connected_components(g).count == 1

    def test_vertex_count(self):
        dom = validate_domain([(0, "a", 0), (1, "b", 1), (2, "c", 0), (0, "b", 1)])
        assert len(build_hx(dom)) == sum(k * (k - 1) for k in dom.sizes)

    @settings(max_examples=80, deadline=None)
    @given(small_rows)
    def test_matches_definition(self, rows):
        dom = domain_or_none(rows)
        if dom is None:
            return
        g = build_hx(dom)
        assert set(g.edges) == literal_edges(dom)
        assert all(g.vertices[a].issue != g.vertices[b].issue for a, b in g.edges)

    @settings(max_examples=30, deadline=None)
    @given(small_rows)
    def test_fallback_matches(self, rows):
        dom = domain_or_none(rows)
        if dom is None:
            return
        original = hx._agreement_masks
        hx._agreement_masks = lambda X: None
        try:
            slow = build_hx(dom)
        finally:
            hx._agreement_masks = original
        assert slow == build_hx(dom)


class TestScc:
    def test_implication_singletons(self, implication):
        assert strongly_connected_components(build_hx(implication)).count == 4

    def test_no_edges(self):
        g = HxGraph(tuple(HxVertex(0, i, i + 1) for i in range(5)), ((),) * 5)
        res = strongly_connected_components(g)
        assert res.count == 5
        assert sorted(res.labels) == list(range(5))

    def test_cycle(self):
        g = HxGraph(tuple(HxVertex(0, i, i + 1) for i in range(4)), ((1,), (2,), (3,), (0,)))
        assert strongly_connected_components(g).count == 1

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 12).flatmap(lambda n: st.tuples(
        st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=30))))
    def test_against_networkx(self, data):
        n, edges = data
        succ = [sorted({b for a, b in edges if a == i}) for i in range(n)]
        g = HxGraph(tuple(HxVertex(0, i, i + 1) for i in range(n)), tuple(tuple(s) for s in succ))
        res = strongly_connected_components(g)
        G = to_nx(g)
        assert res.count == nx.number_strongly_connected_components(G)
        for comp in nx.strongly_connected_components(G):
            assert len({res.labels[v] for v in comp}) == 1
        # ids are topologically ordered on the condensation
        for a, b in g.edges:
            assert res.labels[a] <= res.labels[b]


class TestBinarySynthesis:
    def test_implication_witness(self, implication):
        w = find_binary_nondictatorial(implication)
        assert w.kind is Kind.BINARY
        assert w.tables[0] == {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1}
        assert w.tables[1] == {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 1}

    def test_cube(self, cube2):
        w = find_binary_nondictatorial(cube2)
        assert verify_aggregator(cube2, w)
        assert check_kind(cube2, w, Kind.BINARY)

    def test_one_in_three(self, one_in_three):
        assert find_binary_nondictatorial(one_in_three) is None
        assert is_totally_blocked(one_in_three)

    def test_implication_not_blocked(self, implication):
        assert not is_totally_blocked(implication)

    def test_product_not_blocked(self):
        dom = validate_domain([(a, b) for a in "xy" for b in "pq"])
        assert oracle_binary_nondictatorial(dom) is not None
        assert not is_totally_blocked(dom)

    @settings(max_examples=60, deadline=None)
    @given(small_rows)
    def test_partition_is_forward_free(self, rows):
        dom = domain_or_none(rows)
        if dom is None:
            return
        g = build_hx(dom)
        part = forward_free_partition(g)
        if part is None:
            assert strongly_connected_components(g).count == 1
            return
        v1, v2 = part
        assert v1 and v2 and not v1 & v2
        assert not any(b in v2 for a in v1 for b in g.succ[a])

    def test_deterministic(self, implication):
        dom = validate_domain([(0, 1, 2), (1, 1, 0), (2, 0, 0), (0, 0, 1)])
        assert find_binary_nondictatorial(dom) == find_binary_nondictatorial(dom)


def _closure(g):
    reach = {}
    for v in range(len(g)):
        reach[v] = hx.reachable(g, v)
    return reach


class TestPropagation:
    """Binary aggregators respect edges and paths of the graph."""

    @pytest.mark.parametrize("dom", random_small_domains(40, seed=11, max_rows=7), ids=lambda d: str(d.rows))
    def test_edges_and_paths(self, dom):
        g = build_hx(dom)
        reach = _closure(g)
        for w in enumerate_binary_aggregators(dom):
            for a, targets in reach.items():
                k, u, u2 = g.vertices[a]
                if w.tables[k][(u, u2)] != u:
                    continue
                for b in targets:
                    l, v, v2 = g.vertices[b]
                    assert w.tables[l][(v, v2)] == v

    @pytest.mark.parametrize("dom", random_small_domains(60, seed=5, max_rows=8), ids=lambda d: str(d.rows))
    def test_equivalence_with_oracle(self, dom):
        found = find_binary_nondictatorial(dom)
        assert (found is None) == (oracle_binary_nondictatorial(dom) is None)
