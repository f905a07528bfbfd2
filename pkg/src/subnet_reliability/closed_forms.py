"""Published closed forms for P(i,j,k) and their check against the exhaustive count.

Each table is kept as the printed LaTeX formula and parsed into exact
rational coefficient vectors, so the numbers in use are the ones on the page.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .patterns import check_n
from .reliability import (
    Composition,
    ExponentKey,
    ReliabilityPolynomial,
    composition_polynomial,
    compositions,
)

_FORMULAS = {
    "theorem 1": (
        r"\frac{1}{8}(n^8-4n^7+14n^5-6n^4-16n^3+5n^2+6n)p^{4(n-2)!}"
    ),
    "theorem 2": (
        r"\frac{1}{6}(n^8-7n^7+21n^6-35n^5+34n^4-18n^3+4n^2)p^{4(n-2)!}"
        r"+\frac{1}{2}(n^7-7n^6+21n^5-35n^4+34n^3-18n^2+4n)p^{4(n-2)!-(n-3)!}"
        r"+\frac{1}{2}(n^6-8n^5+25n^4-40n^3+34n^2-12n)p^{4(n-2)!-2(n-3)!}"
        r"+\frac{1}{6}(n^5-10n^4+35n^3-50n^2+24n)p^{4(n-2)!-3(n-3)!}"
    ),
    "theorem 4": (
        r"\frac{4}{3}(8n^5-50n^4+115n^3-115n^2+42n)p^{4(n-2)!}"
        r"+(8n^6-74n^5+265n^4-460n^3+387n^2-126n)p^{4(n-2)!-(n-4)!}"
        r"+(2n^7-25n^6+125n^5-320n^4+443n^3-315n^2+90n)p^{4(n-2)!-2(n-4)!}"
        r"+\frac{1}{6}(n^8-16n^7+105n^6-365n^5+724n^4-819n^3+490n^2-120n)p^{4(n-2)!-3(n-4)!}"
    ),
    "theorem 6": (
        r"\frac{1}{4}(n^8-8n^7+30n^6-69n^5+104n^4-99n^3+53n^2-12n)p^{4(n-2)!}"
        r"+(n^7-8n^6+29n^5-59n^4+68n^3-41n^2+10n)p^{4(n-2)!-(n-3)!}"
        r"+\frac{1}{2}(3n^6-23n^5+67n^4-92n^3+59n^2-14n)p^{4(n-2)!-2(n-3)!}"
        r"+(n^4-6n^3+11n^2-6n)p^{4(n-2)!-3(n-3)!}"
        r"+\frac{1}{4}(n^5-10n^4+35n^3-50n^2+24n)p^{4(n-2)!-4(n-3)!}"
    ),
    "theorem 8": (
        r"\frac{1}{2}(8n^5+8n^4-174n^3+347n^2-189n)p^{4(n-2)!}"
        r"+16(3n^5-25n^4+75n^3-95n^2+42n)p^{4(n-2)!-(n-4)!}"
        r"+4(6n^6-73n^5+345n^4-785n^3+849n^2-342n)p^{4(n-2)!-2(n-4)!}"
        r"+2(2n^7-33n^6+223n^5-785n^4+1503n^3-1462n^2+552n)p^{4(n-2)!-3(n-4)!}"
        r"+\frac{1}{4}(n^8-20n^7+172n^6-822n^5+2340n^4-3916n^3+3499n^2-1254n)p^{4(n-2)!-4(n-4)!}"
    ),
    "theorem 9": (
        r"(8n^6-65n^5+229n^4-421n^3+389n^2-140n)p^{4(n-2)!}"
        r"+\frac{1}{2}(44n^5-291n^4+716n^3-771n^2+302n)p^{4(n-2)!-(n-3)!}"
        r"+\frac{1}{2}(2n^5-5n^4-10n^3+35n^2-22n)p^{4(n-2)!-2(n-3)!}"
        r"+(4n^7-46n^6+231n^5-647n^4+1043n^3-891n^2+306n)p^{4(n-2)!-(n-4)!}"
        r"+(12n^6-128n^5+535n^4-1090n^3+1073n^2-402n)p^{4(n-2)!-(n-3)!-(n-4)!}"
        r"+(7n^5-59n^4+179n^3-229n^2+102n)p^{4(n-2)!-2(n-3)!-(n-4)!}"
        r"+(n^4-6n^3+11n^2-6n)p^{4(n-2)!-3(n-3)!-(n-4)!}"
        r"+\frac{1}{2}(n^8-15n^7+99n^6-377n^5+892n^4-1288n^3+1024n^2-336n)p^{4(n-2)!-2(n-4)!}"
        r"+\frac{1}{2}(3n^7-45n^6+277n^5-893n^4+1580n^3-1438n^2+516n)p^{4(n-2)!-(n-3)!-2(n-4)!}"
        r"+\frac{1}{2}(3n^6-38n^5+187n^4-442n^3+494n^2-204n)p^{4(n-2)!-2(n-3)!-2(n-4)!}"
        r"+\frac{1}{2}(n^5-10n^4+35n^3-50n^2+24n)p^{4(n-2)!-3(n-3)!-2(n-4)!}"
    ),
    "theorem 11": (
        r"(2n^7-17n^6+65n^5-139n^4+173n^3-118n^2+34n)p^{4(n-2)!}"
        r"+(8n^6-61n^5+199n^4-347n^3+315n^2-114n)p^{4(n-2)!-(n-3)!}"
        r"+(n^6-32n^4+112n^3-143n^2+62n)p^{4(n-2)!-2(n-3)!}"
        r"+2(n^5-8n^4+23n^3-28n^2+12n)p^{4(n-2)!-3(n-3)!}"
        r"+\frac{1}{2}(n^8-12n^7+65n^6-207n^5+416n^4-525n^3+382n^2-120n)p^{4(n-2)!-(n-4)!}"
        r"+2(n^7-12n^6+61n^5-171n^4+280n^3-249n^2+90n)p^{4(n-2)!-(n-3)!-(n-4)!}"
        r"+(2n^6-25n^5+121n^4-281n^3+309n^2-126n)p^{4(n-2)!-2(n-3)!-(n-4)!}"
    ),
}

# Compositions the published statements declare equal share one table.
_SOURCES = {
    (4, 0, 0): "theorem 1",
    (0, 4, 0): "theorem 1",
    (0, 0, 4): "theorem 1",
    (3, 1, 0): "theorem 2",
    (1, 3, 0): "theorem 3",
    (0, 3, 1): "theorem 3",
    (0, 1, 3): "theorem 3",
    (3, 0, 1): "theorem 4",
    (1, 0, 3): "theorem 5",
    (2, 2, 0): "theorem 6",
    (0, 2, 2): "theorem 7",
    (2, 0, 2): "theorem 8",
    (2, 1, 1): "theorem 9",
    (1, 1, 2): "theorem 10",
    (1, 2, 1): "theorem 11",
}
_ALIASES = {
    "theorem 3": "theorem 2",
    "theorem 5": "theorem 4",
    "theorem 7": "theorem 6",
    "theorem 10": "theorem 9",
}

_TERM = re.compile(
    r"(?:\\frac\{(?P<num>\d+)\}\{(?P<den>\d+)\}|(?P<mul>\d+))?"
    r"\((?P<poly>[^()]*)\)p\^\{(?P<exp>[^{}]*)\}"
)
_MONO = re.compile(r"([+-]?)(\d*)(n(?:\^(\d+))?)?")
_FACT = re.compile(r"([+-]?)(\d*)\(n-([234])\)!")


def _parse_poly(text: str) -> tuple[int, ...]:
    """``"n^2-3n+2"`` -> (2, -3, 1), lowest degree first."""
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(text):
        m = _MONO.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        sign, digits, var, power = m.groups()
        if not digits and not var:
            raise ValueError(f"empty monomial in {text!r}")
        c = int(digits) if digits else 1
        deg = (int(power) if power else 1) if var else 0
        coeffs[deg] = coeffs.get(deg, 0) + (-c if sign == "-" else c)
        pos = m.end()
    top = max(coeffs)
    return tuple(coeffs.get(d, 0) for d in range(top + 1))


def _parse_exponent(text: str) -> ExponentKey:
    parts = {2: 0, 3: 0, 4: 0}
    pos = 0
    while pos < len(text):
        m = _FACT.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse exponent at {text[pos:]!r}")
        sign, digits, k = m.groups()
        c = int(digits) if digits else 1
        parts[int(k)] += -c if sign == "-" else c
        pos = m.end()
    return ExponentKey(parts[2], parts[3], parts[4])


@dataclass(frozen=True)
class TableEntry:
    prefactor: Fraction
    poly: tuple[int, ...]  # integer coefficients, lowest degree first
    key: ExponentKey

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(self.prefactor * c for c in self.poly)

    def at(self, n: int) -> Fraction:
        return self.prefactor * sum(c * n**d for d, c in enumerate(self.poly))


@dataclass(frozen=True)
class TheoremTable:
    composition: Composition
    source: str
    formula: str
    entries: tuple[TableEntry, ...]


def parse_formula(text: str) -> tuple[TableEntry, ...]:
    entries = []
    pos = 0
    while pos < len(text):
        if entries:
            if text[pos] != "+":
                raise ValueError(f"expected '+' at {text[pos:]!r}")
            pos += 1
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse term at {text[pos:]!r}")
        if m["num"]:
            pre = Fraction(int(m["num"]), int(m["den"]))
        else:
            pre = Fraction(int(m["mul"]) if m["mul"] else 1)
        entries.append(TableEntry(pre, _parse_poly(m["poly"]), _parse_exponent(m["exp"])))
        pos = m.end()
    return tuple(entries)


@lru_cache(maxsize=None)
def theorem_table(c) -> TheoremTable:
    c = Composition.of(c)
    source = _SOURCES[tuple(c)]
    formula = _FORMULAS[_ALIASES.get(source, source)]
    return TheoremTable(c, source, formula, parse_formula(formula))


def closed_form(c, n: int) -> ReliabilityPolynomial:
    """Published P(i,j,k) evaluated at integer n, keys as printed."""
    check_n(n)
    table = theorem_table(c)
    terms: dict[ExponentKey, int] = {}
    for e in table.entries:
        value = e.at(n)
        if value.denominator != 1:
            raise ArithmeticError(f"{table.source}: coefficient {value} at n={n} is not an integer")
        terms[e.key] = terms.get(e.key, 0) + int(value)
    return ReliabilityPolynomial(n, terms)


def orbit(c) -> list[Composition]:
    """Distinct rearrangements of (i, j, k)."""
    c = Composition.of(c)
    return sorted({Composition(*q) for q in itertools.permutations(c)}, reverse=True)


def oracle_polynomial(c, n: int, aggregate_symmetric: bool = False) -> ReliabilityPolynomial:
    c = Composition.of(c)
    if not aggregate_symmetric:
        return composition_polynomial(n, c)
    total = ReliabilityPolynomial(n)
    for q in orbit(c):
        total = total + composition_polynomial(n, q)
    return total


@dataclass(frozen=True)
class ReportRow:
    exponent: int
    paper: int
    oracle: int
    status: str
    ratio: Fraction | None

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "paper": str(self.paper),
            "oracle": str(self.oracle),
            "status": self.status,
            "ratio": None if self.ratio is None else str(self.ratio),
        }


@dataclass(frozen=True)
class VerificationReport:
    n: int
    composition: Composition
    source: str
    rows: tuple[ReportRow, ...]
    aggregate_symmetric: bool = False

    @property
    def status(self) -> str:
        return "MATCH" if all(r.status == "MATCH" for r in self.rows) else "MISMATCH"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "composition": list(self.composition),
            "source": self.source,
            "aggregate_symmetric": self.aggregate_symmetric,
            "status": self.status,
            "rows": [r.to_dict() for r in self.rows],
        }


def _ratio(paper: int, oracle: int) -> Fraction | None:
    if paper == 0 or oracle == 0 or paper == oracle:
        return None
    if paper % oracle == 0 or oracle % paper == 0:
        return Fraction(paper, oracle)
    return None


def compare(paper: ReliabilityPolynomial, oracle: ReliabilityPolynomial) -> tuple[ReportRow, ...]:
    lhs, rhs = paper.collapsed(), oracle.collapsed()
    rows = []
    for e in sorted(set(lhs) | set(rhs), reverse=True):
        a, b = lhs.get(e, 0), rhs.get(e, 0)
        rows.append(ReportRow(e, a, b, "MATCH" if a == b else "MISMATCH", _ratio(a, b)))
    return tuple(rows)


def verify(c, n: int, aggregate_symmetric: bool = False) -> VerificationReport:
    c = Composition.of(c)
    rows = compare(closed_form(c, n), oracle_polynomial(c, n, aggregate_symmetric))
    return VerificationReport(n, c, theorem_table(c).source, rows, aggregate_symmetric)


def verify_all(n: int, aggregate_symmetric: bool = False) -> list[VerificationReport]:
    return [verify(c, n, aggregate_symmetric) for c in compositions()]


def reports_to_json(reports: list[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports])


def reports_to_csv(reports: list[VerificationReport], with_composition: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["exponent", "paper", "oracle", "status", "ratio"]
    w.writerow((["composition"] if with_composition else []) + header)
    for rep in reports:
        for row in rep.rows:
            d = row.to_dict()
            cells = [d[h] if d[h] is not None else "" for h in header]
            w.writerow(([str(rep.composition)] if with_composition else []) + cells)
    return buf.getvalue()


def another_way_count(n: int) -> Fraction:
    """Binomial count of (2,0,2) choices where both BACK patterns meet both FRONT ones."""
    b = math.comb
    pairs = b(n, 2)
    same = pairs * b(2 * b(n - 2, 2), 2)
    one = Fraction(1, 2) * b(2 * pairs, 1) * b(2 * pairs - 2 * b(n - 2, 2) - 2, 1) * b(2 * b(n - 3, 2), 2)
    none = Fraction(1, 2) * b(2 * pairs, 1) * b(2 * b(n - 2, 2), 1) * b(2 * b(n - 4, 2), 2)
    return same + one + none


def cross_check_another_way(n: int) -> bool:
    oracle = composition_polynomial(n, Composition(2, 0, 2)).terms.get(ExponentKey(4, 0, -4), 0)
    return another_way_count(n) == oracle
