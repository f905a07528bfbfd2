"""Command-line front end.

    subnet-rel subnets list --n 4 --format csv
    subnet-rel poly exact --n 4 --composition 4,0,0
    subnet-rel poly paper --n 5 --composition 2,1,1
    subnet-rel verify --n 5 --all [--aggregate-symmetric] [--strict]
    subnet-rel simulate --n 4 --p 0.9 --composition 4,0,0 --trials 100000 --seed 7
    subnet-rel table --n 5 --p-grid 0.9:1:0.02

Exit codes: 0 ok, 1 bad arguments, 2 mismatch under --strict, 3 capacity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from . import closed_forms, reliability
from .patterns import DomainError, check_n, enumerate_patterns
from .perm import CapacityError
from .reliability import Composition, ReliabilityPolynomial


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    n: int
    composition: Composition | None = None
    p: float | None = None
    trials: int | None = None
    seed: int | None = None
    format: str = "json"
    aggregate_symmetric: bool = False
    output: str | None = None


def _composition(text: str) -> Composition:
    try:
        return Composition.of(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _probability(text: str) -> float:
    p = float(text)
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"p must lie in [0, 1], got {text}")
    return p


def parse_p_grid(text: str) -> list[float]:
    """``"a:b:step"`` -> a, a+step, ..., b (inclusive), computed in decimal."""
    try:
        a, b, step = (Decimal(x) for x in text.split(":"))
    except (ValueError, InvalidOperation):
        raise UsageError(f"bad --p-grid {text!r}, expected a:b:step") from None
    if step <= 0 or a > b or a < 0 or b > 1:
        raise UsageError(f"bad --p-grid {text!r}")
    out = []
    x = a
    while x <= b:
        out.append(float(x))
        x += step
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, required=True)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o", help="write to this path instead of stdout")

    parser = _Parser(prog="subnet-rel", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    subnets = sub.add_parser("subnets", help="subnetwork patterns")
    subnets_sub = subnets.add_subparsers(dest="action", required=True)
    subnets_sub.add_parser("list", parents=[common])

    poly = sub.add_parser("poly", help="reliability polynomials")
    poly_sub = poly.add_subparsers(dest="action", required=True)
    for name in ("exact", "paper"):
        sp = poly_sub.add_parser(name, parents=[common])
        sp.add_argument("--composition", type=_composition, required=True)

    verify = sub.add_parser("verify", parents=[common])
    group = verify.add_mutually_exclusive_group(required=True)
    group.add_argument("--composition", type=_composition)
    group.add_argument("--all", action="store_true")
    verify.add_argument("--aggregate-symmetric", action="store_true")
    verify.add_argument("--strict", action="store_true")

    simulate = sub.add_parser("simulate", parents=[common])
    simulate.add_argument("--p", type=_probability, required=True)
    simulate.add_argument("--composition", type=_composition, required=True)
    simulate.add_argument("--trials", type=int, required=True)
    simulate.add_argument("--seed", type=int, required=True)

    table = sub.add_parser("table", parents=[common])
    table.add_argument("--p-grid", required=True)
    table.add_argument("--composition", type=_composition)
    return parser


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _poly_csv(poly: ReliabilityPolynomial) -> str:
    rows = [["c2", "c3", "c4", "exponent", "coefficient"]]
    rows += [[*k, k.value(poly.n), str(c)] for k, c in poly.sorted_terms()]
    return _csv(rows)


def _subnets(args) -> str:
    pats = enumerate_patterns(args.n)
    if args.format == "csv":
        rows = [["pattern", "family", "pos_a", "s1", "pos_b", "s2"]]
        for pat in pats:
            pa, pb = pat.family.positions(args.n)
            rows.append([str(pat), pat.family.name, pa, pat.s1, pb, pat.s2])
        return _csv(rows)
    return json.dumps({"n": args.n, "patterns": [str(p) for p in pats]})


def _poly(args) -> str:
    if args.action == "exact":
        poly = reliability.composition_polynomial(args.n, args.composition)
        extra = {}
    else:
        poly = closed_forms.closed_form(args.composition, args.n)
        extra = {"source": closed_forms.theorem_table(args.composition).source}
    if args.format == "csv":
        return _poly_csv(poly)
    return json.dumps({**poly.to_dict(args.composition), **extra})


def _verify(args) -> tuple[str, list]:
    if args.all:
        reports = closed_forms.verify_all(args.n, args.aggregate_symmetric)
    else:
        reports = [closed_forms.verify(args.composition, args.n, args.aggregate_symmetric)]
    if args.format == "csv":
        text = closed_forms.reports_to_csv(reports, with_composition=args.all)
    else:
        status = "MATCH" if all(r.status == "MATCH" for r in reports) else "MISMATCH"
        payload = {"n": args.n, "status": status, "reports": [r.to_dict() for r in reports]}
        text = json.dumps(payload)
    return text, reports


def _simulate(args) -> str:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    res = reliability.monte_carlo(args.n, args.p, args.composition, args.trials, args.seed)
    exact = reliability.evaluate(
        reliability.composition_polynomial(args.n, args.composition), args.p
    )
    if args.format == "csv":
        return _csv(
            [
                ["n", "composition", "p", "trials", "seed", "rng", "mean", "stderr", "exact"],
                [
                    args.n, str(args.composition), f"{args.p:.12g}", res.trials, res.seed,
                    res.rng, f"{res.mean:.12g}", f"{res.stderr:.12g}", f"{exact:.12g}",
                ],
            ]
        )
    return json.dumps(
        {"n": args.n, "composition": list(args.composition), "p": args.p, **res.to_dict(), "exact": exact}
    )


def _table(args) -> str:
    grid = parse_p_grid(args.p_grid)
    comps = [args.composition] if args.composition else reliability.compositions()
    polys = {c: reliability.composition_polynomial(args.n, c) for c in comps}
    if args.composition is None:
        total = ReliabilityPolynomial(args.n)
        for poly in polys.values():
            total = total + poly
        columns = [(f"P_{c.i}{c.j}{c.k}", poly) for c, poly in polys.items()] + [("total", total)]
    else:
        columns = [(f"P_{c.i}{c.j}{c.k}", poly) for c, poly in polys.items()]
    if args.format == "csv":
        rows = [["p"] + [name for name, _ in columns]]
        for p in grid:
            rows.append([f"{p:.12g}"] + [f"{poly.evaluate(p):.12g}" for _, poly in columns])
        return _csv(rows)
    return json.dumps(
        {
            "n": args.n,
            "rows": [
                {"p": p, **{name: poly.evaluate(p) for name, poly in columns}} for p in grid
            ],
        }
    )


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        check_n(args.n)
        code = 0
        if args.command == "subnets":
            text = _subnets(args)
        elif args.command == "poly":
            text = _poly(args)
        elif args.command == "verify":
            text, reports = _verify(args)
            if args.strict and any(r.status != "MATCH" for r in reports):
                code = 2
        elif args.command == "simulate":
            text = _simulate(args)
        else:
            text = _table(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
