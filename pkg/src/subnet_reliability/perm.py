"""Permutations of {1..n} and the bubble-sort graph adjacency.

Permutations are plain tuples; position 1 is the leftmost symbol.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Iterable, Iterator

Permutation = tuple[int, ...]

# Largest n for which whole-graph or whole-vertex-set enumeration is allowed.
EXPLICIT_CAP = 8


class CapacityError(ValueError):
    """Raised when an explicit enumeration would exceed EXPLICIT_CAP."""


def factorial(k: int) -> int:
    if k < 0:
        raise ValueError(f"factorial of negative number {k}")
    return math.factorial(k)


def is_permutation(p: Iterable[int], n: int | None = None) -> bool:
    p = tuple(p)
    if n is None:
        n = len(p)
    return len(p) == n and sorted(p) == list(range(1, n + 1))


def check_explicit(n: int) -> None:
    if n > EXPLICIT_CAP:
        raise CapacityError(f"n={n} exceeds explicit-enumeration cap {EXPLICIT_CAP}")


def all_permutations(n: int) -> Iterator[Permutation]:
    check_explicit(n)
    return itertools.permutations(range(1, n + 1))


def neighbors(p: Permutation) -> set[Permutation]:
    """The n-1 permutations reached from ``p`` by one adjacent transposition."""
    out = set()
    for i in range(len(p) - 1):
        q = list(p)
        q[i], q[i + 1] = q[i + 1], q[i]
        out.add(tuple(q))
    return out


def induced_adjacency(vertices: Iterable[Permutation]) -> dict[Permutation, set[Permutation]]:
    """Adjacency lists of the subgraph of B_n induced by ``vertices``."""
    vs = set(vertices)
    return {v: neighbors(v) & vs for v in vs}


def is_connected(adj: dict[Permutation, set[Permutation]]) -> bool:
    if not adj:
        return True
    start = next(iter(adj))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(adj)


def degrees(adj: dict[Permutation, set[Permutation]]) -> set[int]:
    return {len(ws) for ws in adj.values()}


def bubble_sort_graph(n: int) -> dict[Permutation, set[Permutation]]:
    return {p: neighbors(p) for p in all_permutations(n)}
