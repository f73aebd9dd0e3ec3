"""Command-line front end.

Reads the JSON formats from :mod:`freelip.formats`, prints JSON reports to
stdout, and signals through the exit code: 0 on success, 1 when a verdict
is negative or a cross-check mismatches, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import choquet, corpus, deleeuw, extremality, formats, freespace, metricspace
from .exactlp import CertificateError
from .formats import FormatError
from .metricspace import InvalidMetricError
from .rational import InexactNumberError, format_rational


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _load(path: str):
    return formats.load_json(path), os.path.dirname(os.path.abspath(path))


def _element(path: str):
    obj, base = _load(path)
    return formats.element_from_obj(obj, context=path, base_dir=base)


def _measure(path: str):
    obj, base = _load(path)
    return formats.measure_from_obj(obj, context=path, base_dir=base)


def _function_obj(f: freespace.PointFunction) -> dict:
    return {
        label: format_rational(v)
        for label, v in zip(f.space.labels, f.values)
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    obj, _ = _load(args.metric)
    try:
        space = formats.metric_from_obj(obj, context=args.metric)
    except InvalidMetricError as exc:
        _emit(
            {
                "valid": False,
                "violations": [
                    {"kind": type(v).__name__, "detail": str(v)}
                    for v in exc.violations
                ],
            }
        )
        return 1
    _emit({"valid": True, "points": len(space.labels), "violations": []})
    return 0


def cmd_norm(args) -> int:
    m = _element(args.element)
    result = freespace.free_norm(m)
    _emit(
        {
            "value": format_rational(result.value),
            "function": _function_obj(result.function),
            "measure": formats.measure_to_obj(result.measure, inline_space=False),
        }
    )
    return 0


def cmd_represent(args) -> int:
    m = _element(args.element)
    if args.minimal:
        mu = choquet.minimal_representation(m)
    else:
        mu = deleeuw.optimal_representation(m)
    report = formats.measure_to_obj(mu, inline_space=False)
    report["total_mass"] = format_rational(mu.total_mass())
    report["optimal"] = deleeuw.is_optimal(mu)
    if args.minimal:
        report["minimal"] = choquet.is_minimal(mu)
    _emit(report)
    return 0


def cmd_preorder(args) -> int:
    mu = _measure(args.mu)
    nu = _measure(args.nu)
    result = choquet.precedes(mu, nu)
    if result.holds:
        moves = [
            {
                "x": mu.space.labels[x],
                "u": mu.space.labels[u],
                "y": mu.space.labels[y],
                "weight": format_rational(w),
            }
            for (x, u, y), w in sorted(result.certificate.weights.items())
        ]
        _emit({"precedes": True, "certificate": {"moves": moves}})
    else:
        _emit(
            {
                "precedes": False,
                "separator": formats.edge_function_to_obj(
                    result.separator, inline_space=False
                ),
            }
        )
    return 0


def cmd_minimal(args) -> int:
    mu = _measure(args.mu)
    nu = choquet.minimal_below(mu)
    _emit(
        {
            "minimal_below": formats.measure_to_obj(nu, inline_space=False),
            "total_mass": format_rational(nu.total_mass()),
            "input_is_minimal": nu == mu,
        }
    )
    return 0


def _verdict_obj(space, verdict: extremality.ExtremalityVerdict) -> dict:
    x, y = verdict.pair
    out = {
        "x": space.labels[x],
        "y": space.labels[y],
        "extreme": verdict.extreme,
    }
    if verdict.between is not None:
        out["between"] = space.labels[verdict.between]
    if verdict.functional is not None:
        out["functional"] = _function_obj(verdict.functional)
        out["margin"] = format_rational(verdict.margin)
    return out


def cmd_extreme(args) -> int:
    obj, _ = _load(args.metric)
    space = formats.metric_from_obj(obj, context=args.metric)
    if args.pair:
        xl, yl = args.pair
        pairs = [(space.index(xl), space.index(yl))]
    else:
        pairs = list(space.pairs)
    rows = []
    mismatches = 0
    for (x, y) in pairs:
        verdict = extremality.classify_molecule(space, x, y)
        row = _verdict_obj(space, verdict)
        if args.oracle:
            oracle = extremality.vertex_oracle(space, x, y)
            row["oracle"] = oracle
            if oracle != verdict.extreme:
                mismatches += 1
        rows.append(row)
    report = {
        "pairs": rows,
        "extreme": sum(1 for r in rows if r["extreme"]),
        "not_extreme": sum(1 for r in rows if not r["extreme"]),
    }
    if args.oracle:
        report["mismatches"] = mismatches
    _emit(report)
    return 1 if mismatches else 0


def cmd_decompose(args) -> int:
    m = _element(args.element)
    obj, _ = _load(args.parts)
    parts = formats.partition_from_obj(obj, m.space, context=args.parts)
    pieces = deleeuw.decompose(m, parts)
    norms = [freespace.norm_value(p) for p in pieces]
    total = freespace.norm_value(m)
    additive = sum(norms, Fraction(0)) == total
    _emit(
        {
            "parts": [
                dict(
                    formats.element_to_obj(p, inline_space=False),
                    norm=format_rational(v),
                )
                for p, v in zip(pieces, norms)
            ],
            "norm": format_rational(total),
            "norms_additive": additive,
        }
    )
    return 0 if additive else 1


def cmd_diagonal(args) -> int:
    m = _element(args.element)
    part_c, part_d, certificate = choquet.diagonal_decompose(m)
    checks = {
        "certificate_optimal": deleeuw.is_optimal(certificate),
        "certificate_minimal": choquet.is_minimal(certificate),
        "diagonal_part_zero": part_d.is_zero(),
    }
    _emit(
        {
            "molecular_part": formats.element_to_obj(part_c, inline_space=False),
            "diagonal_part": formats.element_to_obj(part_d, inline_space=False),
            "certificate": formats.measure_to_obj(certificate, inline_space=False),
            "checks": checks,
        }
    )
    return 0 if all(checks.values()) else 1


def cmd_dilations(args) -> int:
    obj_a, _ = _load(args.metric_a)
    obj_b, _ = _load(args.metric_b)
    space_a = formats.metric_from_obj(obj_a, context=args.metric_a)
    space_b = formats.metric_from_obj(obj_b, context=args.metric_b)
    found = metricspace.find_dilations(space_a, space_b)
    rows = []
    failures = 0
    for dil in found:
        row = {
            "c": format_rational(dil.factor),
            "map": {
                space_a.labels[i]: space_b.labels[dil.mapping[i]]
                for i in range(space_a.n)
            },
        }
        if args.verify:
            report = extremality.verify_banach_stone(space_a, space_b, dil)
            row["verified"] = report.ok
            if not report.ok:
                failures += 1
        rows.append(row)
    _emit({"count": len(rows), "dilations": rows})
    return 1 if failures else 0


def cmd_gcheck(args) -> int:
    obj, base = _load(args.edgefunction)
    g = formats.edge_function_from_obj(obj, context=args.edgefunction, base_dir=base)
    ok, witness = choquet.in_cone_G(g)
    report = {"in_cone": ok}
    if witness is not None:
        x, u, y = witness
        report["witness"] = {
            "x": g.space.labels[x],
            "u": g.space.labels[u],
            "y": g.space.labels[y],
        }
    _emit(report)
    return 0 if ok else 1


def cmd_corpus(args) -> int:
    report = corpus.run_battery(args.n, args.count, args.seed)
    _emit(report)
    return 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freelip",
        description="Exact, certificate-carrying computation in free spaces "
        "over finite pointed metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the metric axioms of a space file")
    p.add_argument("metric")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("norm", help="norm of an element with both optimal witnesses")
    p.add_argument("element")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("represent", help="optimal representing measure of an element")
    p.add_argument("element")
    p.add_argument("--minimal", action="store_true", help="also minimise in the quasi-order")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("preorder", help="decide mu <= nu with a certificate")
    p.add_argument("mu")
    p.add_argument("nu")
    p.set_defaults(func=cmd_preorder)

    p = sub.add_parser("minimal", help="minimal measure below the input")
    p.add_argument("mu")
    p.set_defaults(func=cmd_minimal)

    p = sub.add_parser("extreme", help="extreme-point classification of all molecules")
    p.add_argument("metric")
    p.add_argument("--pair", nargs=2, metavar=("X", "Y"), help="classify one ordered pair")
    p.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check against hull membership; exit 1 on any mismatch",
    )
    p.set_defaults(func=cmd_extreme)

    p = sub.add_parser("decompose", help="split an element along a pair partition")
    p.add_argument("element")
    p.add_argument("--parts", required=True, help="partition file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("diagonal", help="molecular/diagonal split with certificate")
    p.add_argument("element")
    p.set_defaults(func=cmd_diagonal)

    p = sub.add_parser("dilations", help="all scale-and-relabel bijections between two spaces")
    p.add_argument("metric_a")
    p.add_argument("metric_b")
    p.add_argument("--verify", action="store_true", help="verify the induced isometries")
    p.set_defaults(func=cmd_dilations)

    p = sub.add_parser("gcheck", help="membership of an edge function in the cone")
    p.add_argument("edgefunction")
    p.set_defaults(func=cmd_gcheck)

    p = sub.add_parser("corpus", help="randomized property battery over generated spaces")
    p.add_argument("--n", type=int, default=6, help="maximum number of points")
    p.add_argument("--count", type=int, default=20, help="number of spaces")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, InexactNumberError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidMetricError as exc:
        print(f"error: invalid metric: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CertificateError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
