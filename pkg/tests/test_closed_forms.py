import json
import math
from fractions import Fraction

import pytest

from subnet_reliability import closed_forms
from subnet_reliability.closed_forms import (
    _parse_exponent,
    _parse_poly,
    another_way_count,
    closed_form,
    cross_check_another_way,
    orbit,
    parse_formula,
    reports_to_csv,
    theorem_table,
    verify,
    verify_all,
)
from subnet_reliability.reliability import Composition, ExponentKey, ReliabilityPolynomial, compositions

# Second, hand-typed copy of a few printed coefficients, independent of the parser.
HAND_TYPED = {
    ((4, 0, 0), (4, 0, 0)): lambda n: Fraction(n**8 - 4 * n**7 + 14 * n**5 - 6 * n**4 - 16 * n**3 + 5 * n**2 + 6 * n, 8),
    ((3, 1, 0), (4, 0, 0)): lambda n: Fraction(n**8 - 7 * n**7 + 21 * n**6 - 35 * n**5 + 34 * n**4 - 18 * n**3 + 4 * n**2, 6),
    ((2, 0, 2), (4, 0, -4)): lambda n: Fraction(
        n**8 - 20 * n**7 + 172 * n**6 - 822 * n**5 + 2340 * n**4 - 3916 * n**3 + 3499 * n**2 - 1254 * n, 4
    ),
    ((2, 2, 0), (4, 0, 0)): lambda n: Fraction(n**8 - 8 * n**7 + 30 * n**6 - 69 * n**5 + 104 * n**4 - 99 * n**3 + 53 * n**2 - 12 * n, 4),
    ((3, 0, 1), (4, 0, 0)): lambda n: Fraction(4, 3) * (8 * n**5 - 50 * n**4 + 115 * n**3 - 115 * n**2 + 42 * n),
    ((2, 1, 1), (4, -3, -2)): lambda n: Fraction(n**5 - 10 * n**4 + 35 * n**3 - 50 * n**2 + 24 * n, 2),
    ((1, 2, 1), (4, -1, -1)): lambda n: 2 * (n**7 - 12 * n**6 + 61 * n**5 - 171 * n**4 + 280 * n**3 - 249 * n**2 + 90 * n),
}


def test_parse_poly():
    assert _parse_poly("n^2-3n+2") == (2, -3, 1)
    assert _parse_poly("8n^5+8n^4-174n^3") == (0, 0, 0, -174, 8, 8)
    with pytest.raises(ValueError):
        _parse_poly("n^2-*3")


def test_parse_exponent():
    assert _parse_exponent("4(n-2)!") == (4, 0, 0)
    assert _parse_exponent("4(n-2)!-(n-3)!-2(n-4)!") == (4, -1, -2)
    with pytest.raises(ValueError):
        _parse_exponent("4(n-5)!")


def test_parse_formula_terms():
    entries = parse_formula(r"\frac{4}{3}(n^2-n)p^{4(n-2)!}+16(n)p^{4(n-2)!-(n-4)!}+(1)p^{4(n-2)!-3(n-3)!}")
    assert [e.prefactor for e in entries] == [Fraction(4, 3), 16, 1]
    assert [e.key for e in entries] == [(4, 0, 0), (4, 0, -1), (4, -3, 0)]
    with pytest.raises(ValueError):
        parse_formula(r"(n)p^{4(n-2)!}(n)p^{4(n-2)!}")


@pytest.mark.parametrize("comp_key", list(HAND_TYPED))
@pytest.mark.parametrize("n", range(4, 13))
def test_tables_match_hand_typed(comp_key, n):
    c, key = comp_key
    assert closed_form(c, n).terms.get(ExponentKey(*key), 0) == HAND_TYPED[comp_key](n)


@pytest.mark.parametrize("c", compositions())
def test_integrality(c):
    table = theorem_table(c)
    keys = [e.key for e in table.entries]
    assert len(keys) == len(set(keys))
    assert all(k.c2 == 4 for k in keys)
    for n in range(4, 13):
        for e in table.entries:
            v = e.at(n)
            assert v.denominator == 1 and v >= 0


def test_theorem_one_identity():
    assert closed_form((4, 0, 0), 4).terms == {(4, 0, 0): 1485}
    for n in range(4, 13):
        assert closed_form((4, 0, 0), n).terms[(4, 0, 0)] == 3 * math.comb(n * (n - 1), 4)


@pytest.mark.parametrize(
    "alias, base",
    [((1, 3, 0), (3, 1, 0)), ((0, 3, 1), (3, 1, 0)), ((0, 1, 3), (3, 1, 0)), ((1, 0, 3), (3, 0, 1)),
     ((0, 2, 2), (2, 2, 0)), ((1, 1, 2), (2, 1, 1)), ((0, 4, 0), (4, 0, 0)), ((0, 0, 4), (4, 0, 0))],
)
def test_aliased_tables(alias, base):
    assert theorem_table(alias).entries == theorem_table(base).entries
    assert theorem_table(alias).source != "" and theorem_table(alias).composition == alias


def test_all_compositions_have_tables():
    assert {tuple(theorem_table(c).composition) for c in compositions()} == set(map(tuple, compositions()))


def test_verify_theorem_one_row():
    for c in [(4, 0, 0), (0, 4, 0), (0, 0, 4)]:
        rep = verify(c, 4)
        assert len(rep.rows) == 1
        row = rep.rows[0]
        assert (row.exponent, row.paper, row.oracle, row.status, row.ratio) == (8, 1485, 495, "MISMATCH", 3)
        assert rep.status == "MISMATCH"


def test_verify_aggregate_symmetric_resolves_factor_three():
    for n in (4, 5):
        rep = verify((0, 0, 4), n, aggregate_symmetric=True)
        assert rep.status == "MATCH"


def test_orbit():
    assert orbit((4, 0, 0)) == [(4, 0, 0), (0, 4, 0), (0, 0, 4)]
    assert len(orbit((3, 1, 0))) == 6
    assert len(orbit((2, 1, 1))) == 3


def test_compare_rows_cover_both_sides():
    paper = ReliabilityPolynomial(5, {ExponentKey(4, 0, 0): 6, ExponentKey(4, -1, 0): 1})
    oracle = ReliabilityPolynomial(5, {ExponentKey(4, 0, 0): 2, ExponentKey(4, 0, -1): 3})
    rows = closed_forms.compare(paper, oracle)
    assert [(r.exponent, r.paper, r.oracle, r.status) for r in rows] == [
        (24, 6, 2, "MISMATCH"),
        (23, 0, 3, "MISMATCH"),
        (22, 1, 0, "MISMATCH"),
    ]
    assert rows[0].ratio == 3 and rows[1].ratio is None


def test_ratio_below_one():
    rows = closed_forms.compare(
        ReliabilityPolynomial(5, {ExponentKey(4, 0, 0): 2}), ReliabilityPolynomial(5, {ExponentKey(4, 0, 0): 6})
    )
    assert rows[0].ratio == Fraction(1, 3)


def test_verify_match_summary():
    rep = verify((3, 1, 0), 5)
    assert all(r.status == "MATCH" for r in rep.rows)
    assert rep.status == "MATCH"


def test_verify_deterministic():
    a = [r.to_dict() for r in verify_all(4)]
    b = [r.to_dict() for r in verify_all(4)]
    assert json.dumps(a) == json.dumps(b)


def test_csv_rendering():
    text = reports_to_csv([verify((4, 0, 0), 4)])
    assert text.splitlines() == ["exponent,paper,oracle,status,ratio", "8,1485,495,MISMATCH,3"]
    text = reports_to_csv([verify((4, 0, 0), 4)], with_composition=True)
    assert text.splitlines()[1] == '"4,0,0",8,1485,495,MISMATCH,3'


@pytest.mark.parametrize("n", [5, 6])
def test_cross_check_another_way(n):
    assert cross_check_another_way(n)


def test_another_way_polynomial():
    # The binomial sum equals the printed Case-17 coefficient.
    for n in range(4, 13):
        assert another_way_count(n) == HAND_TYPED[((2, 0, 2), (4, 0, -4))](n)


def test_another_way_empty_oracle(monkeypatch):
    monkeypatch.setattr(closed_forms, "composition_polynomial", lambda n, c: ReliabilityPolynomial(n))
    assert another_way_count(4) == 6
    assert cross_check_another_way(4) is False


def test_closed_form_rejects_small_n():
    with pytest.raises(ValueError):
        closed_form(Composition(4, 0, 0), 3)
