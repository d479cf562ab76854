"""Command-line front end over the JSON file formats.

Exit codes: 0 success, 1 negative domain verdict (not in cone, not implied,
infeasible/inconclusive, zero projection), 2 usage or file-format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import boxgeom, cone, covers, farkas, realize, witness
from .core import (
    FormatError,
    MAX_DIMENSION,
    ProjectionVector,
    canonical_subset_order,
    format_rational,
    format_subset,
    log_fraction,
    parse_rational,
    parse_subset,
    read_vector,
    write_vector,
)


def _print(obj) -> None:
    print(json.dumps(obj, indent=2))


def _read_text(path: str) -> str:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"input file not found: {path}")
    return p.read_text(encoding="utf-8")


def _cover_objs(items) -> list[dict]:
    return [covers.cover_to_obj(c) for c in items]


def _gap(value: Fraction) -> str:
    return repr(float(value))


def cmd_covers(args) -> int:
    ground = parse_subset(args.ground, MAX_DIMENSION)
    k_max = args.kmax if args.kmax is not None else max(ground.bit_count(), 1)
    if args.irreducible:
        found = covers.irreducible_covers(ground, k_max)
    else:
        found = covers.enumerate_covers(ground, k_max)
    _print({"ground": format_subset(ground), "k_max": k_max, "count": len(found),
            "covers": _cover_objs(found)})
    return 0


def _load_vector(path: str, n_override) -> ProjectionVector:
    v = read_vector(_read_text(path))
    if n_override is not None:
        if n_override < v.n:
            raise FormatError(f"--n {n_override} is below the file dimension {v.n}")
        v = v.embed(n_override)
    return v


def cmd_member(args) -> int:
    v = _load_vector(args.vector, args.n)
    system = cone.build_bt_system(v.n, args.kmax)
    report = cone.membership(system, v)
    _print({
        "n": v.n,
        "inside": report.inside,
        "violated": [g.to_obj() for g in report.violated],
        "tight": [g.to_obj() for g in report.tight],
    })
    return 0 if report.inside else 1


def cmd_imply(args) -> int:
    ineq = farkas.read_inequality(_read_text(args.inequality))
    system = cone.build_bt_system(ineq.n, args.kmax)
    result = farkas.check_implication(system, ineq)
    if isinstance(result, farkas.FarkasCertificate):
        _print({
            "inequality": ineq.format_text(),
            "implied": True,
            "certificate": farkas.certificate_to_obj(system, result),
        })
        return 0
    out = {
        "inequality": ineq.format_text(),
        "implied": False,
        "witness": json.loads(write_vector(result.vector)),
        "violation_gap": format_rational(result.gap),
    }
    if args.emit_body:
        report = farkas.violating_body(system, ineq, result.vector)
        Path(args.emit_body).write_text(boxgeom.write_body(report.body), encoding="utf-8")
        out["body_file"] = args.emit_body
        out["body"] = {
            "lambda": format_rational(report.realization.lam),
            "shift_eps": format_rational(report.shift_eps),
            "exponent_scale": report.exponent_scale,
            "lhs_product": format_rational(report.lhs_product),
            "rhs_product": format_rational(report.rhs_product),
            "violated": report.violated,
        }
    _print(out)
    return 1


def cmd_realize(args) -> int:
    v = read_vector(_read_text(args.vector))
    eps = parse_rational(args.epsilon)
    cap = parse_rational(args.lambda_cap)
    try:
        result = realize.find_lambda(v, eps, cap)
    except realize.NotInConeError as exc:
        _print({"realized": False, "reason": "not-in-cone", "detail": str(exc)})
        return 1
    except realize.InconclusiveError as exc:
        _print({"realized": False, "reason": "inconclusive", "detail": str(exc),
                "lambda_cap": format_rational(cap)})
        return 1
    Path(args.out).write_text(boxgeom.write_body(result.body), encoding="utf-8")
    report = {
        "realized": True,
        "lambda": format_rational(result.lam),
        "body_file": args.out,
        "max_gap": _gap(result.max_gap),
        "gaps": {format_subset(m): _gap(g) for m, g in result.residual_report.items()},
        # volumes can exceed float range at large lambda; report their logs
        "steps": [
            {
                "ground": format_subset(step.ground),
                "log_z": {
                    format_subset(a): repr(float(log_fraction(vol)))
                    for a, vol in sorted(step.system.z.items())
                },
            }
            for step in result.steps
        ],
    }
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2), encoding="utf-8")
    _print(report)
    return 0


def cmd_project(args) -> int:
    body = boxgeom.read_body(_read_text(args.body))
    profile = boxgeom.log_projection_vector(body)
    volumes = {
        format_subset(m): format_rational(profile.volumes[m])
        for m in canonical_subset_order(body.n)
    }
    if not profile.all_positive:
        _print({
            "constructible": False,
            "volumes": volumes,
            "zero_projections": [
                format_subset(m) for m, v in profile.volumes.items() if v == 0
            ],
            "detail": "some projection has measure zero; thicken the body first",
        })
        return 1
    vector = profile.to_projection_vector()
    Path(args.out).write_text(write_vector(vector), encoding="utf-8")
    _print({"constructible": True, "volumes": volumes, "vector_file": args.out})
    return 0


def cmd_system(args) -> int:
    system = cone.build_bt_system(args.n, args.kmax)
    text = system.h_representation()
    if text:
        print(text)
    return 0


def cmd_witness(args) -> int:
    v = witness.theorem9_vector(args.n)
    report = witness.analyze_witness(v, args.kmax)
    _print({
        "n": args.n,
        "vector": json.loads(write_vector(v)),
        "in_cone": report.in_cone,
        "tight": [g.to_obj() for g in report.tight],
        "obstruction_lhs": format_rational(report.obstruction_lhs),
        "obstruction_rhs": format_rational(report.obstruction_rhs),
        "obstruction_holds": report.obstruction_holds,
    })
    return 0 if report.in_cone else 1


def cmd_shearer(args) -> int:
    family = witness.read_family(_read_text(args.family))
    cover = covers.cover_from_json(_read_text(args.cover))
    try:
        report = witness.shearer_check(family, cover.parts, args.k)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print({
        "family_size": len(family.members),
        "k": args.k,
        "trace_sizes": list(report.trace_sizes),
        "lhs_product": report.lhs_product,
        "rhs_power": report.rhs_power,
        "holds": report.holds,
    })
    return 0 if report.holds else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covercone",
        description="Exact computation with the uniform-cover cone of log projection volumes.",
    )
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized subcommands (reserved; none sample today)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("covers", help="enumerate uniform covers of a ground set")
    p.add_argument("--ground", required=True, help="comma-separated elements, e.g. 1,2,3")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--irreducible", action="store_true")
    p.set_defaults(func=cmd_covers)

    p = sub.add_parser("member", help="test cone membership of a vector file")
    p.add_argument("--vector", required=True)
    p.add_argument("--n", type=int, default=None, help="embed into this dimension")
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("imply", help="certificate or witness for an inequality file")
    p.add_argument("--inequality", required=True)
    p.add_argument("--emit-body", default=None, help="write a violating body here")
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=cmd_imply)

    p = sub.add_parser("realize", help="construct a body for a scaled interior vector")
    p.add_argument("--vector", required=True)
    p.add_argument("--epsilon", default="1/4")
    p.add_argument("--lambda-cap", default="1024")
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("project", help="exact projection volumes and log vector of a body")
    p.add_argument("--body", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("system", help="print the generator list as plain-text inequalities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=cmd_system)

    p = sub.add_parser("witness", help="analyze the boundary witness vector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("shearer", help="discrete product-theorem check for a set family")
    p.add_argument("--family", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_shearer)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
