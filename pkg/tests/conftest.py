import itertools
import random

import pytest

from possdom.core import validate_domain

IMPLICATION = [(0, 0), (0, 1), (1, 1)]
PARITY = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
ONE_IN_THREE = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
CUBE2 = [(0, 0), (0, 1), (1, 0), (1, 1)]
DIAGONAL = [("a", "a"), ("b", "b"), ("c", "c")]
ONE_IN_THREE_TIMES_BOOL = [r + (b,) for r in ONE_IN_THREE for b in (0, 1)]


@pytest.fixture
def implication():
    return validate_domain(IMPLICATION)


@pytest.fixture
def parity():
    return validate_domain(PARITY)


@pytest.fixture
def one_in_three():
    return validate_domain(ONE_IN_THREE)


@pytest.fixture
def cube2():
    return validate_domain(CUBE2)


@pytest.fixture
def diagonal():
    return validate_domain(DIAGONAL)


@pytest.fixture
def product_separation():
    return validate_domain(ONE_IN_THREE_TIMES_BOOL)


def nondegenerate_subsets(points):
    """Every subset of ``points`` whose projections all have two or more values."""
    m = len(points[0])
    for r in range(2, len(points) + 1):
        for sub in itertools.combinations(points, r):
            if all(len({p[j] for p in sub}) >= 2 for j in range(m)):
                yield list(sub)


def boolean_cube(m):
    return list(itertools.product((0, 1), repeat=m))


def random_small_domains(count, seed, max_size=3, max_m=3, max_rows=8):
    """Random non-degenerate domains with alphabets in {2..max_size}."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = rng.randint(1, max_m)
        sizes = [rng.randint(2, max_size) for _ in range(m)]
        space = list(itertools.product(*[range(k) for k in sizes]))
        n = rng.randint(max(sizes), min(max_rows, len(space)))
        rows = rng.sample(space, n)
        if all(len({r[j] for r in rows}) == k for j, k in enumerate(sizes)):
            out.append(validate_domain(rows))
    return out
