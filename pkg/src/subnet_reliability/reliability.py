"""Exact reliability polynomials for four B_{n-2} subnetworks, plus Monte Carlo.

P(i,j,k) is the sum, over every choice of i FRONT, j ENDS and k BACK patterns,
of p**|union of their vertex sets|. Union sizes come from inclusion-exclusion
over the 15 nonempty sub-collections, each intersection contributing
(n-f)! where f is the number of fixed positions after merging.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .patterns import (
    DomainError,
    Family,
    SubnetworkPattern,
    check_n,
    enumerate_patterns,
    intersection_count_exponent,
    merge,
    vertex_set,
)
from .perm import CapacityError, all_permutations, check_explicit, factorial

# Largest n accepted by the exhaustive polynomial path.
SYMBOLIC_CAP = 12

RNG_ALGORITHM = "PCG64"


class ExponentKey(NamedTuple):
    """Exponent c2*(n-2)! + c3*(n-3)! + c4*(n-4)!."""

    c2: int
    c3: int
    c4: int

    def value(self, n: int) -> int:
        return self.c2 * factorial(n - 2) + self.c3 * factorial(n - 3) + self.c4 * factorial(n - 4)

    def __add__(self, other):
        return ExponentKey(self.c2 + other.c2, self.c3 + other.c3, self.c4 + other.c4)

    def scaled(self, k: int) -> "ExponentKey":
        return ExponentKey(k * self.c2, k * self.c3, k * self.c4)


# (n-f)! for f = 2, 3, 4 fixed positions.
_BASIS = {
    2: ExponentKey(1, 0, 0),
    3: ExponentKey(0, 1, 0),
    4: ExponentKey(0, 0, 1),
}
_ZERO = ExponentKey(0, 0, 0)


class Composition(NamedTuple):
    i: int
    j: int
    k: int

    @classmethod
    def of(cls, value) -> "Composition":
        if isinstance(value, str):
            value = [int(v) for v in value.split(",")]
        c = cls(*(int(v) for v in value))
        if min(c) < 0 or sum(c) != 4:
            raise DomainError(f"composition must be non-negative and sum to 4, got {tuple(c)}")
        return c

    def reversed(self) -> "Composition":
        return Composition(self.k, self.j, self.i)

    def __str__(self) -> str:
        return f"{self.i},{self.j},{self.k}"


def compositions() -> list[Composition]:
    """All 15 compositions, ordered by descending (i, j, k)."""
    return [
        Composition(i, j, 4 - i - j)
        for i in range(4, -1, -1)
        for j in range(4 - i, -1, -1)
    ]


@dataclass
class ReliabilityPolynomial:
    """Sparse map ExponentKey -> integer coefficient at a fixed n."""

    n: int
    terms: dict[ExponentKey, int] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {ExponentKey(*k): int(v) for k, v in self.terms.items() if v != 0}

    def __add__(self, other: "ReliabilityPolynomial") -> "ReliabilityPolynomial":
        if other.n != self.n:
            raise ValueError("cannot add polynomials for different n")
        acc = Counter(self.terms)
        acc.update(other.terms)
        return ReliabilityPolynomial(self.n, dict(acc))

    def total(self) -> int:
        return sum(self.terms.values())

    def collapsed(self) -> dict[int, int]:
        """Coefficients per numeric exponent; distinct keys can coincide at small n."""
        out: dict[int, int] = {}
        for key, coeff in self.terms.items():
            e = key.value(self.n)
            out[e] = out.get(e, 0) + coeff
        return {e: c for e, c in sorted(out.items()) if c != 0}

    def sorted_terms(self) -> list[tuple[ExponentKey, int]]:
        return sorted(self.terms.items(), key=lambda kv: (-kv[0].value(self.n), kv[0]))

    def evaluate(self, p: float) -> float:
        return evaluate(self, p)

    def to_dict(self, composition: Composition | None = None) -> dict:
        d: dict = {"n": self.n}
        if composition is not None:
            d["composition"] = list(composition)
        d["terms"] = [
            {"key": list(k), "exponent": k.value(self.n), "coefficient": str(c)}
            for k, c in self.sorted_terms()
        ]
        return d

    def to_json(self, composition: Composition | None = None) -> str:
        return json.dumps(self.to_dict(composition))

    @classmethod
    def from_dict(cls, d: dict) -> "ReliabilityPolynomial":
        terms = {ExponentKey(*t["key"]): int(t["coefficient"]) for t in d["terms"]}
        return cls(int(d["n"]), terms)

    @classmethod
    def from_json(cls, text: str) -> "ReliabilityPolynomial":
        return cls.from_dict(json.loads(text))


def union_exponent(pats: Sequence[SubnetworkPattern], n: int) -> ExponentKey:
    """Key of |V1 u V2 u V3 u V4| by inclusion-exclusion over constraint merges."""
    if len(pats) != 4 or len(set(pats)) != 4:
        raise ValueError("union_exponent needs 4 pairwise distinct patterns")
    key = _ZERO
    for r in range(1, 5):
        sign = 1 if r % 2 else -1
        for sub in itertools.combinations(pats, r):
            f = intersection_count_exponent(merge(sub, n), n)
            if f is None:
                continue
            if f not in _BASIS:
                raise AssertionError(f"unexpected fixed-position count {f}")
            key = key + _BASIS[f].scaled(sign)
    return key


def union_size_explicit(pats: Sequence[SubnetworkPattern], n: int) -> int:
    check_explicit(n)
    if len(pats) != 4 or len(set(pats)) != 4:
        raise ValueError("union_size_explicit needs 4 pairwise distinct patterns")
    return len(frozenset().union(*(_frozen_vertex_set(pat, n) for pat in pats)))


@lru_cache(maxsize=4096)
def _frozen_vertex_set(pat: SubnetworkPattern, n: int) -> frozenset:
    return frozenset(vertex_set(pat, n))


def _check_symbolic(n: int) -> None:
    check_n(n)
    if n > SYMBOLIC_CAP:
        raise CapacityError(f"n={n} exceeds exhaustive cap {SYMBOLIC_CAP}")


def composition_subsets(n: int, c: Composition) -> Iterator[tuple[SubnetworkPattern, ...]]:
    """Every 4-subset with the given family split, in enumerate_patterns order."""
    fams = [enumerate_patterns(n, fam) for fam in Family]
    return (
        a + b + d
        for a in itertools.combinations(fams[0], c.i)
        for b in itertools.combinations(fams[1], c.j)
        for d in itertools.combinations(fams[2], c.k)
    )


def composition_polynomial_direct(n: int, c: Composition) -> ReliabilityPolynomial:
    """Reference path: generic union_exponent on every 4-subset."""
    c = Composition.of(c)
    _check_symbolic(n)
    acc = Counter(union_exponent(s, n) for s in composition_subsets(n, c))
    return ReliabilityPolynomial(n, dict(acc))


def _thread_count() -> int:
    env = os.environ.get("SUBNET_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _pair_feasibility(n: int) -> tuple[list[SubnetworkPattern], np.ndarray]:
    pats = enumerate_patterns(n)
    m = len(pats)
    feas = np.zeros((m, m), dtype=bool)
    for a, b in itertools.combinations(range(m), 2):
        feas[a, b] = feas[b, a] = merge([pats[a], pats[b]], n).feasible
    return pats, feas


def _index_combinations(start: int, size: int, r: int) -> np.ndarray:
    if r == 0:
        return np.zeros((1, 0), dtype=np.int32)
    rows = list(itertools.combinations(range(start, start + size), r))
    return np.array(rows, dtype=np.int32)


def composition_polynomial(n: int, c: Composition) -> ReliabilityPolynomial:
    """Exhaustive P(i,j,k) as an exact polynomial in p.

    Two patterns conflict or not independently of any others, so a
    sub-collection is feasible iff all its pairs are, and its fixed-position
    count depends only on which families occur. That turns the 15-term
    inclusion-exclusion into array operations over pair flags.
    """
    c = Composition.of(c)
    _check_symbolic(n)
    pats, feas = _pair_feasibility(n)
    per_family = n * (n - 1)
    slot_family = [Family.FRONT] * c.i + [Family.ENDS] * c.j + [Family.BACK] * c.k

    # Per sub-collection of slots: pair list and basis vector of (n-f)!.
    subsets = []
    for r in range(2, 5):
        sign = 1 if r % 2 else -1
        for sub in itertools.combinations(range(4), r):
            positions = set()
            for s in sub:
                positions.update(slot_family[s].positions(n))
            subsets.append((sub, sign, _BASIS[len(positions)]))

    combos = [_index_combinations(f * per_family, per_family, r) for f, r in enumerate(c)]
    head = combos[0] if c.i else (combos[1] if c.j else combos[2])
    head_idx = 0 if c.i else (1 if c.j else 2)
    tails = [combos[f] for f in range(head_idx + 1, 3)]

    def tail_product() -> np.ndarray:
        out = np.zeros((1, 0), dtype=np.int32)
        for t in tails:
            out = np.concatenate(
                [np.repeat(out, len(t), axis=0), np.tile(t, (len(out), 1))], axis=1
            )
        return out

    tail = tail_product()

    def chunk_terms(rows: np.ndarray) -> Counter:
        idx = np.concatenate(
            [np.repeat(rows, len(tail), axis=0), np.tile(tail, (len(rows), 1))], axis=1
        )
        pair = {
            (a, b): feas[idx[:, a], idx[:, b]] for a, b in itertools.combinations(range(4), 2)
        }
        coeffs = np.zeros((len(idx), 3), dtype=np.int64)
        coeffs[:, 0] = 4
        for sub, sign, basis in subsets:
            ok = np.ones(len(idx), dtype=bool)
            for a, b in itertools.combinations(sub, 2):
                ok &= pair[(a, b)]
            coeffs += np.outer(ok.astype(np.int64) * sign, np.array(basis, dtype=np.int64))
        keys, counts = np.unique(coeffs, axis=0, return_counts=True)
        return Counter({ExponentKey(*map(int, k)): int(v) for k, v in zip(keys, counts)})

    rows_per_chunk = max(1, 2_000_000 // max(1, len(tail)))
    chunks = [head[s : s + rows_per_chunk] for s in range(0, len(head), rows_per_chunk)]
    acc: Counter = Counter()
    if len(chunks) > 1 and _thread_count() > 1:
        with ThreadPoolExecutor(_thread_count()) as pool:
            for part in pool.map(chunk_terms, chunks):
                acc.update(part)
    else:
        for ch in chunks:
            acc.update(chunk_terms(ch))
    return ReliabilityPolynomial(n, dict(acc))


def total_polynomial(n: int) -> ReliabilityPolynomial:
    total = ReliabilityPolynomial(n)
    for c in compositions():
        total = total + composition_polynomial(n, c)
    return total


def evaluate(poly: ReliabilityPolynomial, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return math.fsum(coeff * p ** key.value(poly.n) for key, coeff in poly.terms.items())


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    stderr: float
    trials: int
    seed: int
    rng: str = RNG_ALGORITHM

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "trials": self.trials,
            "seed": self.seed,
            "rng": self.rng,
        }


def _membership(n: int) -> np.ndarray:
    """Boolean matrix patterns x permutations."""
    perms = list(all_permutations(n))
    index = {q: t for t, q in enumerate(perms)}
    pats = enumerate_patterns(n)
    mat = np.zeros((len(pats), len(perms)), dtype=bool)
    for r, pat in enumerate(pats):
        for q in vertex_set(pat, n):
            mat[r, index[q]] = True
    return mat


def monte_carlo(
    n: int,
    p: float,
    c: Composition,
    trials: int,
    seed: int,
    chunk: int = 10_000,
) -> MonteCarloResult:
    """Estimate P(i,j,k) as the mean of C(f1,i) C(f2,j) C(f3,k) over random fault draws.

    Chunk t draws from PCG64 seeded by SeedSequence(seed).spawn(...)[t], so
    the estimate is a pure function of (n, p, c, trials, seed, chunk).
    """
    c = Composition.of(c)
    check_n(n)
    check_explicit(n)
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    member = _membership(n).astype(np.int32)
    per_family = n * (n - 1)
    n_chunks = -(-trials // chunk)
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    stats = []
    for t, ss in enumerate(seqs):
        size = min(chunk, trials - t * chunk)
        rng = np.random.Generator(np.random.PCG64(ss))
        dead = (rng.random((size, member.shape[1])) >= p).astype(np.int32)
        alive_pat = (dead @ member.T) == 0
        counts = alive_pat.reshape(size, 3, per_family).sum(axis=2)
        stat = np.ones(size, dtype=np.float64)
        for f, r in enumerate(c):
            stat *= np.array([math.comb(int(v), r) for v in counts[:, f]], dtype=np.float64)
        stats.append(stat)
    values = np.concatenate(stats)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return MonteCarloResult(mean, stderr, trials, seed)
