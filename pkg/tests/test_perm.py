import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from subnet_reliability.perm import (
    CapacityError,
    all_permutations,
    bubble_sort_graph,
    degrees,
    factorial,
    is_connected,
    is_permutation,
    neighbors,
)


@pytest.mark.parametrize("k, expected", [(0, 1), (2, 2), (6, 720), (20, 2432902008176640000)])
def test_factorial(k, expected):
    assert factorial(k) == expected


def test_factorial_negative():
    with pytest.raises(ValueError):
        factorial(-1)


def test_neighbors_small():
    assert len(neighbors((1, 2, 3, 4))) == 3
    assert neighbors((1, 2)) == {(2, 1)}


permutations_5 = st.permutations(list(range(1, 6))).map(tuple)


@given(permutations_5)
def test_neighbors_adjacent_transpositions(p):
    nbrs = neighbors(p)
    assert len(nbrs) == 4
    for q in nbrs:
        assert is_permutation(q, 5)
        diff = [i for i in range(5) if p[i] != q[i]]
        assert len(diff) == 2 and diff[1] == diff[0] + 1
        assert p in neighbors(q)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_bubble_sort_graph_connected_regular(n):
    g = bubble_sort_graph(n)
    assert len(g) == factorial(n)
    assert degrees(g) == {n - 1}
    assert is_connected(g)
    for p, nbrs in g.items():
        assert all(p in g[q] for q in nbrs)


def test_explicit_cap():
    with pytest.raises(CapacityError):
        all_permutations(9)
    assert sum(1 for _ in all_permutations(4)) == 24


def test_is_permutation():
    assert is_permutation((2, 1, 3))
    assert not is_permutation((1, 1, 3))
    assert not is_permutation((1, 2), 3)
    assert all(is_permutation(p) for p in itertools.permutations(range(1, 5)))
