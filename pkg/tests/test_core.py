import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from possdom.core import (
    AggregatorWitness,
    AllIssuesDegenerate,
    AlphabetMismatch,
    ArityMismatch,
    DegenerateIssue,
    EmptyInput,
    Kind,
    RaggedRow,
    WrongArity,
    check_kind,
    is_dictatorial,
    maj3,
    projection_witness,
    validate_domain,
    verify_aggregator,
    xor3,
)
from possdom.polysearch import componentwise

from conftest import IMPLICATION


def brute_closed(dom, w):
    rows = set(dom.codes)
    return all(w.apply(combo) in rows for combo in itertools.product(dom.codes, repeat=w.arity))


def table2(f, k=2):
    return {(x, y): f(x, y) for x in range(k) for y in range(k)}


AND = table2(min)
PR1 = table2(lambda x, y: x)


class TestValidate:
    def test_projections(self):
        dom = validate_domain([(0, 0), (0, 1), (1, 1)])
        assert dom.m == 2
        assert dom.alphabets == ((0, 1), (0, 1))
        assert dom.labels == (1, 2)

    def test_dedup_keeps_first_occurrence(self):
        dom = validate_domain([("b", "x"), ("a", "y"), ("b", "x")])
        assert dom.rows == (("b", "x"), ("a", "y"))
        assert dom.alphabets[0] == ("b", "a")
        assert dom.codes == ((0, 0), (1, 1))

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateIssue) as exc:
            validate_domain([(0, 5), (1, 5)])
        assert exc.value.issue == 2

    def test_degenerate_repair(self):
        dom = validate_domain([(0, 5), (1, 5)], repair_degenerate=True)
        assert dom.m == 1
        assert dom.alphabets == ((0, 1),)
        assert dom.dropped == (2,)
        assert dom.labels == (1,)

    def test_repair_keeps_column_order(self):
        dom = validate_domain([(0, 7, "p", 1), (1, 7, "q", 1)], repair_degenerate=True)
        assert dom.labels == (1, 3)
        assert dom.rows == ((0, "p"), (1, "q"))

    def test_errors(self):
        with pytest.raises(EmptyInput):
            validate_domain([])
        with pytest.raises(RaggedRow):
            validate_domain([(0, 1), (1,)])
        with pytest.raises(AllIssuesDegenerate):
            validate_domain([(0, 0), (0, 0)], repair_degenerate=True)

    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 3)), min_size=1, max_size=12))
    def test_idempotent(self, raw):
        try:
            dom = validate_domain(raw)
        except DegenerateIssue:
            return
        again = validate_domain(dom.rows)
        assert again == dom


class TestVerify:
    def test_full_cube_projections(self, cube2):
        for d in (1, 2):
            assert verify_aggregator(cube2, projection_witness(cube2, 2, d))

    def test_and_first_projection_on_implication(self, implication):
        w = AggregatorWitness(2, (AND, PR1))
        assert brute_closed(implication, w)
        assert verify_aggregator(implication, w)

    def test_majority_on_one_in_three_fails(self, one_in_three):
        w = componentwise(one_in_three, maj3, Kind.MAJORITY)
        v = verify_aggregator(one_in_three, w)
        assert not v
        assert v.rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_not_conservative(self, implication):
        bad = dict(AND)
        bad[(0, 0)] = 1
        v = verify_aggregator(implication, AggregatorWitness(2, (bad, PR1)))
        assert not v and v.reason == "not conservative"

    def test_shape_errors(self, implication):
        with pytest.raises(ArityMismatch):
            verify_aggregator(implication, AggregatorWitness(4, (AND, PR1)))
        with pytest.raises(AlphabetMismatch):
            verify_aggregator(implication, AggregatorWitness(2, (AND,)))
        short = {k: v for k, v in AND.items() if k != (1, 1)}
        with pytest.raises(AlphabetMismatch):
            verify_aggregator(implication, AggregatorWitness(2, (short, PR1)))

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_matches_brute_force(self, data):
        rows = data.draw(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 1)), min_size=2, max_size=6, unique=True))
        try:
            dom = validate_domain(rows)
        except DegenerateIssue:
            return
        arity = data.draw(st.sampled_from([2, 3]))
        tables = []
        for k in dom.sizes:
            t = {}
            for args in itertools.product(range(k), repeat=arity):
                t[args] = data.draw(st.sampled_from(sorted(set(args))))
            tables.append(t)
        w = AggregatorWitness(arity, tuple(tables))
        assert bool(verify_aggregator(dom, w)) == brute_closed(dom, w)


class TestDictatorial:
    def test_first_projection(self, parity):
        assert is_dictatorial(parity, projection_witness(parity, 2, 1)) == 1
        assert is_dictatorial(parity, projection_witness(parity, 3, 3)) == 3

    def test_and_first_projection(self, implication):
        w = AggregatorWitness(2, (AND, PR1))
        assert is_dictatorial(implication, w) is None
        # ((1,1),(0,0)) maps to (0,1), which is neither input
        assert w.apply(((1, 1), (0, 0))) == (0, 1)

    def test_diagonal_and(self):
        dom = validate_domain([(0, 0), (1, 1)])
        w = AggregatorWitness(2, (AND, AND))
        assert is_dictatorial(dom, w) is None

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_matches_row_definition(self, data):
        dom = validate_domain(IMPLICATION)
        tables = tuple(
            {(x, y): data.draw(st.sampled_from(sorted({x, y}))) for x in range(2) for y in range(2)} for _ in range(2)
        )
        w = AggregatorWitness(2, tables)
        literal = None
        for d in (0, 1):
            if all(w.apply(pair) == pair[d] for pair in itertools.product(dom.codes, repeat=2)):
                literal = d + 1
                break
        assert is_dictatorial(dom, w) == literal


class TestCheckKind:
    def test_parity_xor_is_minority(self, parity):
        w = componentwise(parity, xor3, Kind.MINORITY)
        assert verify_aggregator(parity, w)
        assert check_kind(parity, w, Kind.MINORITY)
        assert not check_kind(parity, w, Kind.MAJORITY)
        assert check_kind(parity, w, Kind.WNU)

    def test_wnu_violation(self, implication):
        w = componentwise(implication, maj3, Kind.GENERIC)
        t = dict(w.tables[0])
        t[(0, 0, 1)] = 0
        t[(0, 1, 0)] = 1
        v = check_kind(implication, AggregatorWitness(3, (t, w.tables[1])), Kind.WNU)
        assert not v
        assert v.issue == 0 and set(v.args) == {0, 1}

    def test_diagonal_wnu(self, diagonal):
        def g(x, y, z):
            if x == y or x == z:
                return x
            if y == z:
                return y
            return x

        w = componentwise(diagonal, g, Kind.WNU)
        assert verify_aggregator(diagonal, w)
        assert check_kind(diagonal, w, Kind.WNU)
        assert check_kind(diagonal, w, Kind.MAJORITY)

    def test_wrong_arity(self, implication):
        with pytest.raises(WrongArity):
            check_kind(implication, projection_witness(implication, 2, 1), Kind.MAJORITY)
        with pytest.raises(WrongArity):
            check_kind(implication, projection_witness(implication, 3, 1), Kind.BINARY)

    def test_binary_nondict(self, implication):
        assert check_kind(implication, AggregatorWitness(2, (AND, PR1)), Kind.BINARY)
        assert not check_kind(implication, projection_witness(implication, 2, 2), Kind.BINARY)

    @pytest.mark.parametrize("op,kind", [(maj3, Kind.MAJORITY), (xor3, Kind.MINORITY)])
    def test_truth_tables_and_never_dictatorial(self, op, kind, cube2):
        w = componentwise(cube2, op, kind)
        assert check_kind(cube2, w, kind)
        assert is_dictatorial(cube2, w) is None
        for args in itertools.product((0, 1), repeat=3):
            assert w.tables[0][args] == op(*args)
