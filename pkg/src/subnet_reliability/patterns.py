"""B_{n-2} subnetwork patterns of B_n and their intersection calculus.

A pattern fixes two symbols at two positions. The three families differ
only in which positions are fixed:

    FRONT  a1 a2 X^{n-2}   positions (1, 2)
    ENDS   a1 X^{n-2} a2   positions (1, n)
    BACK   X^{n-2} a1 a2   positions (n-1, n)

Intersections of pattern vertex sets are again pattern-shaped: the union of
the fixed assignments either conflicts (empty intersection) or fixes ``f``
positions, leaving (n-f)! permutations.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .perm import Permutation, check_explicit, factorial


class DomainError(ValueError):
    """Input outside the supported domain (for example n < 4)."""


class Family(enum.IntEnum):
    FRONT = 0
    ENDS = 1
    BACK = 2

    @property
    def code(self) -> str:
        return "FEB"[self]

    def positions(self, n: int) -> tuple[int, int]:
        if self is Family.FRONT:
            return (1, 2)
        if self is Family.ENDS:
            return (1, n)
        return (n - 1, n)

    @classmethod
    def from_code(cls, code: str) -> "Family":
        try:
            return cls("FEB".index(code.upper()))
        except ValueError:
            raise ValueError(f"unknown family code {code!r}") from None


@dataclass(frozen=True, order=True)
class SubnetworkPattern:
    family: Family
    s1: int
    s2: int

    def __post_init__(self):
        if self.s1 == self.s2:
            raise ValueError(f"pattern symbols must differ, got {self.s1}, {self.s2}")

    def fixed_assignments(self, n: int) -> dict[int, int]:
        pa, pb = self.family.positions(n)
        return {pa: self.s1, pb: self.s2}

    def __str__(self) -> str:
        return f"{self.family.code}:{self.s1},{self.s2}"

    @classmethod
    def parse(cls, text: str) -> "SubnetworkPattern":
        """Inverse of ``str``: ``"F:1,2"`` -> FRONT(1, 2)."""
        code, _, rest = text.partition(":")
        a, b = rest.split(",")
        return cls(Family.from_code(code.strip()), int(a), int(b))


def FRONT(s1: int, s2: int) -> SubnetworkPattern:
    return SubnetworkPattern(Family.FRONT, s1, s2)


def ENDS(s1: int, s2: int) -> SubnetworkPattern:
    return SubnetworkPattern(Family.ENDS, s1, s2)


def BACK(s1: int, s2: int) -> SubnetworkPattern:
    return SubnetworkPattern(Family.BACK, s1, s2)


def check_n(n: int) -> None:
    if n < 4:
        raise DomainError(f"n must be at least 4, got {n}")


def enumerate_patterns(n: int, family: Family | None = None) -> list[SubnetworkPattern]:
    """All 3n(n-1) patterns ordered by (family, s1, s2), or one family's n(n-1)."""
    check_n(n)
    families = list(Family) if family is None else [family]
    return [
        SubnetworkPattern(fam, a, b)
        for fam in families
        for a, b in itertools.permutations(range(1, n + 1), 2)
    ]


def contains(pat: SubnetworkPattern, p: Permutation) -> bool:
    n = len(p)
    return all(p[pos - 1] == sym for pos, sym in pat.fixed_assignments(n).items())


def vertex_set(pat: SubnetworkPattern, n: int) -> set[Permutation]:
    check_n(n)
    check_explicit(n)
    return constrained_permutations(pat.fixed_assignments(n), n)


def constrained_permutations(assignments: dict[int, int], n: int) -> set[Permutation]:
    """Every permutation of {1..n} agreeing with a position->symbol map."""
    check_explicit(n)
    free_pos = [i for i in range(1, n + 1) if i not in assignments]
    free_sym = sorted(set(range(1, n + 1)) - set(assignments.values()))
    out = set()
    for fill in itertools.permutations(free_sym):
        p = dict(assignments)
        p.update(zip(free_pos, fill))
        out.add(tuple(p[i] for i in range(1, n + 1)))
    return out


@dataclass(frozen=True)
class MergedConstraint:
    """Joint fixed assignments of several patterns; ``assignments`` is None when they conflict."""

    assignments: tuple[tuple[int, int], ...] | None

    @property
    def feasible(self) -> bool:
        return self.assignments is not None

    def as_dict(self) -> dict[int, int]:
        if self.assignments is None:
            raise ValueError("infeasible constraint has no assignments")
        return dict(self.assignments)


INFEASIBLE = MergedConstraint(None)


def merge_assignments(maps: Iterable[dict[int, int]]) -> MergedConstraint:
    pos_to_sym: dict[int, int] = {}
    sym_to_pos: dict[int, int] = {}
    for m in maps:
        for pos, sym in m.items():
            if pos_to_sym.setdefault(pos, sym) != sym:
                return INFEASIBLE
            if sym_to_pos.setdefault(sym, pos) != pos:
                return INFEASIBLE
    return MergedConstraint(tuple(sorted(pos_to_sym.items())))


def merge(pats: Sequence[SubnetworkPattern], n: int) -> MergedConstraint:
    if not pats:
        raise ValueError("merge needs at least one pattern")
    return merge_assignments(p.fixed_assignments(n) for p in pats)


def intersection_count_exponent(m: MergedConstraint, n: int) -> int | None:
    """Number of fixed positions f, so the intersection has (n-f)! vertices; None if empty."""
    if not m.feasible:
        return None
    return len(m.assignments)


def intersection_size(pats: Sequence[SubnetworkPattern], n: int) -> int:
    f = intersection_count_exponent(merge(pats, n), n)
    return 0 if f is None else factorial(n - f)
