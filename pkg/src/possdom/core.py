"""Domain model and witness verification.

Everything that leaves this package as a witness goes through
:func:`verify_aggregator` and :func:`check_kind` first.

Position tokens are opaque. Each column is interned to dense integers in
first-occurrence order, and all tables are keyed by those integers.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

Table = Mapping[tuple, int]


class DomainError(ValueError):
    """Base class for invalid domain input."""


class EmptyInput(DomainError):
    def __init__(self):
        super().__init__("no evaluations given")


class RaggedRow(DomainError):
    def __init__(self, index: int, length: int, expected: int):
        self.index = index
        self.length = length
        self.expected = expected
        super().__init__(f"row {index + 1} has {length} coordinates, expected {expected}")


class DegenerateIssue(DomainError):
    def __init__(self, issue: int):
        self.issue = issue
        super().__init__(f"issue {issue} takes a single position")


class AllIssuesDegenerate(DomainError):
    def __init__(self):
        super().__init__("every issue takes a single position")


class WitnessError(ValueError):
    """A witness does not fit the domain or the requested check."""


class ArityMismatch(WitnessError):
    pass


class AlphabetMismatch(WitnessError):
    pass


class WrongArity(WitnessError):
    pass


class Kind(str, enum.Enum):
    BINARY = "binary"
    MAJORITY = "majority"
    MINORITY = "minority"
    WNU = "wnu"
    GENERIC = "generic"


@dataclass(frozen=True)
class Domain:
    """A set of feasible evaluations.

    ``rows`` holds the evaluations in original token spelling, ``codes`` the
    same rows interned column by column. ``alphabets[j][c]`` is the token
    with code ``c`` in issue ``j``. ``labels`` are the 1-based column numbers
    of the input the issues came from (they differ from ``1..m`` only when
    degenerate columns were dropped).
    """

    rows: tuple
    codes: tuple
    alphabets: tuple
    labels: tuple
    dropped: tuple = ()

    @property
    def m(self) -> int:
        return len(self.alphabets)

    def size(self, j: int) -> int:
        return len(self.alphabets[j])

    @property
    def sizes(self) -> tuple:
        return tuple(len(a) for a in self.alphabets)

    @property
    def is_boolean(self) -> bool:
        return all(len(a) == 2 for a in self.alphabets)

    def __len__(self) -> int:
        return len(self.codes)

    def code_set(self) -> frozenset:
        return frozenset(self.codes)

    def array(self) -> np.ndarray:
        return np.array(self.codes, dtype=np.int64).reshape(len(self.codes), self.m)

    def token(self, j: int, code: int):
        return self.alphabets[j][code]

    def code(self, j: int, token) -> int:
        try:
            return self.alphabets[j].index(token)
        except ValueError:
            raise AlphabetMismatch(f"{token!r} is not a position of issue {self.labels[j]}") from None


def validate_domain(raw_rows: Iterable[Sequence[Hashable]], repair_degenerate: bool = False) -> Domain:
    """Build a :class:`Domain` from raw token rows.

    Duplicate rows are dropped, keeping first occurrences. A column with a
    single position raises :class:`DegenerateIssue` unless
    ``repair_degenerate`` is set, in which case it is removed and its 1-based
    index recorded in ``Domain.dropped``.
    """
    rows = [tuple(r) for r in raw_rows]
    if not rows:
        raise EmptyInput()
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise RaggedRow(i, len(r), width)
    if width == 0:
        raise AllIssuesDegenerate()

    unique = list(dict.fromkeys(rows))
    alphabets = [list(dict.fromkeys(r[j] for r in unique)) for j in range(width)]

    keep = []
    dropped = []
    for j, alpha in enumerate(alphabets):
        if len(alpha) >= 2:
            keep.append(j)
        elif repair_degenerate:
            dropped.append(j + 1)
        else:
            raise DegenerateIssue(j + 1)
    if not keep:
        raise AllIssuesDegenerate()

    if dropped:
        # dropping constant columns cannot merge distinct rows
        unique = [tuple(r[j] for j in keep) for r in unique]
    alphabets = [tuple(alphabets[j]) for j in keep]
    lookup = [{t: c for c, t in enumerate(a)} for a in alphabets]
    codes = tuple(tuple(lookup[j][t] for j, t in enumerate(r)) for r in unique)
    return Domain(
        rows=tuple(unique),
        codes=codes,
        alphabets=tuple(alphabets),
        labels=tuple(j + 1 for j in keep),
        dropped=tuple(dropped),
    )


@dataclass(frozen=True)
class AggregatorWitness:
    """Per-issue function tables ``tables[j][(a_1, ..., a_n)] -> a``, on codes."""

    arity: int
    tables: tuple
    kind: Kind = Kind.GENERIC

    def apply(self, rows: Sequence[tuple]) -> tuple:
        return tuple(t[tuple(r[j] for r in rows)] for j, t in enumerate(self.tables))

    def with_kind(self, kind: Kind) -> "AggregatorWitness":
        return AggregatorWitness(self.arity, self.tables, kind)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    rows: Optional[tuple] = None
    issue: Optional[int] = None
    args: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


OK = Verdict(True)


def projection_witness(dom: Domain, arity: int, d: int, kind: Kind = Kind.GENERIC) -> AggregatorWitness:
    """All-``pr_d`` tables (``d`` is 1-based)."""
    tables = tuple(
        {args: args[d - 1] for args in itertools.product(range(k), repeat=arity)} for k in dom.sizes
    )
    return AggregatorWitness(arity, tables, kind)


def _check_shape(dom: Domain, w: AggregatorWitness) -> None:
    if w.arity not in (2, 3):
        raise ArityMismatch(f"arity {w.arity} is not supported (only 2 and 3)")
    if len(w.tables) != dom.m:
        raise AlphabetMismatch(f"witness has {len(w.tables)} tables for {dom.m} issues")
    for j, t in enumerate(w.tables):
        k = dom.size(j)
        if len(t) != k ** w.arity:
            raise AlphabetMismatch(f"table for issue {dom.labels[j]} has {len(t)} entries, expected {k ** w.arity}")
        for args, v in t.items():
            if len(args) != w.arity:
                raise ArityMismatch(f"entry {args} in issue {dom.labels[j]} has wrong arity")
            if not all(0 <= a < k for a in args) or not 0 <= v < k:
                raise AlphabetMismatch(f"entry {args} -> {v} in issue {dom.labels[j]} is outside the alphabet")


def _dense(dom: Domain, w: AggregatorWitness) -> list:
    out = []
    for j, t in enumerate(w.tables):
        k = dom.size(j)
        arr = np.empty((k,) * w.arity, dtype=np.int64)
        for args, v in t.items():
            arr[args] = v
        out.append(arr)
    return out


def _row_keys(dom: Domain, arr: np.ndarray) -> np.ndarray:
    # mixed-radix encoding of rows; object dtype when the radix overflows int64
    radix = 1
    for k in dom.sizes:
        radix *= k
    dtype = np.int64 if radix < 2 ** 62 else object
    keys = np.zeros(arr.shape[:-1], dtype=dtype)
    for j, k in enumerate(dom.sizes):
        keys = keys * k + arr[..., j].astype(dtype)
    return keys


def closure_violation(dom: Domain, w: AggregatorWitness) -> Optional[tuple]:
    """Return row indices ``(i_1, ..., i_n)`` whose image leaves X, or None."""
    X = dom.array()
    N = len(X)
    dense = _dense(dom, w)
    allowed = np.sort(_row_keys(dom, X))
    for first in range(N):
        if w.arity == 2:
            image = np.stack([dense[j][X[first, j], X[:, j]] for j in range(dom.m)], axis=-1)
        else:
            image = np.stack(
                [dense[j][X[first, j], X[:, j][:, None], X[:, j][None, :]] for j in range(dom.m)], axis=-1
            )
        keys = _row_keys(dom, image)
        pos = np.searchsorted(allowed, keys)
        pos = np.minimum(pos, N - 1)
        bad = np.argwhere(allowed[pos] != keys)
        if len(bad):
            return (first,) + tuple(int(i) for i in bad[0])
    return None


def verify_aggregator(dom: Domain, w: AggregatorWitness) -> Verdict:
    """Check conservativeness and closure of ``w`` over all row n-tuples."""
    _check_shape(dom, w)
    for j, t in enumerate(w.tables):
        for args, v in t.items():
            if v not in args:
                return Verdict(False, "not conservative", issue=j, args=args)
    bad = closure_violation(dom, w)
    if bad is not None:
        rows = tuple(dom.rows[i] for i in bad)
        return Verdict(False, "image of rows is not in X", rows=rows)
    return OK


def is_dictatorial(dom: Domain, w: AggregatorWitness) -> Optional[int]:
    """Return the 1-based dictator index, or None.

    Since every ``X_j`` is the projection of X, each table entry is reached
    by some row n-tuple, so agreeing with ``pr_d`` on all row tuples is the
    same as every table being ``pr_d``.
    """
    for d in range(w.arity):
        if all(v == args[d] for t in w.tables for args, v in t.items()):
            return d + 1
    return None


def _pairs(k: int):
    return itertools.combinations(range(k), 2)


def maj3(x, y, z):
    return x if x == y or x == z else y


def xor3(x, y, z):
    if x == y:
        return z
    if y == z:
        return x
    return y


def check_kind(dom: Domain, w: AggregatorWitness, kind: Kind) -> Verdict:
    """Kind-specific check for an already verified witness."""
    kind = Kind(kind)
    if kind is Kind.BINARY:
        if w.arity != 2:
            raise WrongArity(f"{kind.value} needs arity 2, got {w.arity}")
        d = is_dictatorial(dom, w)
        return OK if d is None else Verdict(False, f"dictatorial on coordinate {d}")
    if kind not in (Kind.MAJORITY, Kind.MINORITY, Kind.WNU):
        raise WrongArity(f"no check for kind {kind.value}")
    if w.arity != 3:
        raise WrongArity(f"{kind.value} needs arity 3, got {w.arity}")
    ref = maj3 if kind is Kind.MAJORITY else xor3
    for j, t in enumerate(w.tables):
        for x, y in _pairs(dom.size(j)):
            if kind is Kind.WNU:
                for a, b in ((x, y), (y, x)):
                    vals = (t[(b, a, a)], t[(a, b, a)], t[(a, a, b)])
                    if len(set(vals)) != 1:
                        return Verdict(False, "weak near-unanimity equalities fail", issue=j, args=(a, b))
                continue
            for args in itertools.product((x, y), repeat=3):
                if t[args] != ref(*args):
                    return Verdict(False, f"restriction is not {kind.value}", issue=j, args=args)
    return OK
