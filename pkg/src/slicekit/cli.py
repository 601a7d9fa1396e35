"""Command-line front end: monodromy runs, representation vectors, star
products, stem-system validation, and the seeded verification suites.

Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 domain
error (branch-point crossing and friends).  Output is JSON by default;
`monodromy` can also emit a one-row CSV table.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import checks
from .calculus import SliceRegularPoly, regular_conjugate, star_product, symmetrization
from .errors import SliceKitError
from .monodromy import (
    SliceFunctionModel,
    final_state,
    germ_key,
    model_by_name,
)
from .paths import NPartPath
from .quat import ImaginaryUnit, Quaternion, quat_inverse
from .representation import evaluate_via_formula, invariance_check, representation_vector
from .sliceunits import SliceUnitMatrix, eta
from .stems import build_stem_system, system_to_json, validate_stem_system

SEED_ENV = "SLICEKIT_SEED"


def _read_maybe_file(arg: str) -> str:
    path = Path(arg)
    if path.exists():
        return path.read_text()
    return arg


def _parse_units(text: str) -> tuple[ImaginaryUnit, ...]:
    parts = [p for p in text.split(";") if p.strip()]
    return tuple(ImaginaryUnit.from_list(json.loads(p)) for p in parts)


def _parse_path(arg: str) -> NPartPath:
    return NPartPath.from_json(_read_maybe_file(arg))


def _parse_poly(arg: str) -> SliceRegularPoly:
    return SliceRegularPoly.from_json_obj(json.loads(_read_maybe_file(arg)))


def _build_model(args) -> SliceFunctionModel:
    coeffs = None
    if args.model in ("poly", "polynomial"):
        if not getattr(args, "coeffs", None):
            raise ValueError("--coeffs is required for the polynomial model")
        coeffs = _parse_poly(args.coeffs).coefficients
    return model_by_name(args.model, coeffs)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0


def cmd_monodromy(args) -> int:
    model = _build_model(args)
    path = _parse_path(args.path)
    units = _parse_units(args.units)
    state = final_state(model, path, units, args.x0)
    key = germ_key(model, state)
    value = model.value(state)
    payload = {
        "value": value.to_list(),
        "germ_key": {"point": key.point.to_list(), "value": key.value.to_list()},
        "parts": path.parts,
    }
    exit_code = 0
    if args.check_analytic and path.parts == 2 and args.model in ("sqrt", "log"):
        k1, k2 = units
        if args.model == "sqrt":
            expected = quat_inverse(k2) * k1
        else:
            expected = math.pi * k1 - math.pi * k2
        deviation = (value - expected).norm()
        payload["analytic_deviation"] = deviation
        if args.tol is not None and deviation > args.tol:
            exit_code = 1
    if args.format == "csv":
        header = (
            "value_w,value_x,value_y,value_z,"
            "point_w,point_x,point_y,point_z,parts"
        )
        row = ",".join(f"{c!r}" for c in value.to_list() + key.point.to_list()) + f",{path.parts}"
        print(header)
        print(row)
    else:
        print(json.dumps(payload))
    return exit_code


def cmd_repformula(args) -> int:
    model = _build_model(args)
    path = _parse_path(args.path)
    if args.J:
        j = SliceUnitMatrix.from_json(_read_maybe_file(args.J))
    else:
        j = eta(path.parts, Quaternion(0, 1, 0, 0))
    g = representation_vector(model, path, j, args.x0)
    alt = eta(path.parts, Quaternion(0, 0, 1, 0))
    deviation = invariance_check(model, path, j, alt, args.x0)
    payload = {
        "G": [q.to_list() for q in g.entries],
        "invariance_dev": deviation,
    }
    if args.units:
        units = _parse_units(args.units)
        payload["value"] = evaluate_via_formula(g, units).to_list()
    print(json.dumps(payload))
    return 1 if args.tol is not None and deviation > args.tol else 0


def cmd_starprod(args) -> int:
    f = _parse_poly(args.f)
    if args.op == "star":
        if not args.g:
            raise ValueError("--g is required for op=star")
        out = star_product(f, _parse_poly(args.g))
    elif args.op == "conj":
        out = regular_conjugate(f)
    elif args.op == "sym":
        out = symmetrization(f)
    else:
        raise ValueError(f"unknown op {args.op!r}")
    print(json.dumps(out.to_json_obj()))
    return 0


def cmd_stem(args) -> int:
    model = _build_model(args)
    anchors = []
    for idx, path_arg in enumerate(args.path):
        anchors.append((f"path{idx}" if len(args.path) > 1 else "path", _parse_path(path_arg)))
    extra = tuple(float(t) for t in args.extra_truncations.split(",") if t) if args.extra_truncations else ()
    system = build_stem_system(model, anchors, radius=args.radius, extra_truncations=extra)
    report = validate_stem_system(system)
    if args.out:
        Path(args.out).write_text(system_to_json(system))
    print(json.dumps(report.to_dict()))
    return 0 if report.passed else 1


def cmd_check(args) -> int:
    results = checks.run_suite(args.suite, _seed(args))
    if args.format == "json":
        print(json.dumps({"seed": _seed(args), "checks": [r.to_dict() for r in results]}))
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slicekit", description=__doc__)
    seed_parent = argparse.ArgumentParser(add_help=False)
    seed_parent.add_argument(
        "--seed", type=int, default=None, help=f"sampling seed (default ${SEED_ENV} or 0)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_units=True):
        p.add_argument("--model", required=True, choices=["sqrt", "log", "poly"])
        p.add_argument("--path", required=True, help="path JSON file or literal JSON")
        p.add_argument("--coeffs", help="polynomial coefficients JSON (for --model poly)")
        p.add_argument("--x0", type=float, default=None, help="expected real starting point")
        p.add_argument(
            "--tol", type=float, default=None, help="fail (exit 1) when the reported deviation exceeds this"
        )
        if with_units:
            p.add_argument("--units", help='lift units, e.g. "[0,0,1];[0,1,0]"')

    p_mono = sub.add_parser("monodromy", parents=[seed_parent], help="continue a model along a lifted path")
    common(p_mono)
    p_mono.add_argument("--format", choices=["json", "csv"], default="json")
    p_mono.add_argument(
        "--check-analytic",
        action="store_true",
        help="report deviation from the two-part loop formula (beta path)",
    )
    p_mono.set_defaults(fn=cmd_monodromy, units_required=True)

    p_rep = sub.add_parser("repformula", parents=[seed_parent], help="invariant vector and formula evaluation")
    common(p_rep)
    p_rep.add_argument("--J", help="slice-unit matrix JSON file (default: eta stack over i)")
    p_rep.set_defaults(fn=cmd_repformula)

    p_star = sub.add_parser("starprod", parents=[seed_parent], help="star product / conjugate / symmetrization")
    p_star.add_argument("--f", required=True, help="polynomial JSON file or literal")
    p_star.add_argument("--g", help="second polynomial (for op=star)")
    p_star.add_argument("--op", choices=["star", "conj", "sym"], default="star")
    p_star.set_defaults(fn=cmd_starprod)

    p_stem = sub.add_parser("stem", parents=[seed_parent], help="build and validate a stem system")
    p_stem.add_argument("--model", required=True, choices=["sqrt", "log", "poly"])
    p_stem.add_argument("--path", required=True, nargs="+", help="anchor path JSON file(s)")
    p_stem.add_argument("--coeffs", help="polynomial coefficients JSON")
    p_stem.add_argument("--radius", type=float, default=0.8)
    p_stem.add_argument("--extra-truncations", default="", help='comma list, e.g. "0.25,0.75"')
    p_stem.add_argument("--out", help="write sampled system JSON here")
    p_stem.set_defaults(fn=cmd_stem)

    p_check = sub.add_parser("check", parents=[seed_parent], help="run seeded verification suites")
    p_check.add_argument(
        "--suite",
        default="all",
        choices=sorted(checks.SUITES) + ["all"],
    )
    p_check.add_argument("--format", choices=["json", "lines"], default="lines")
    p_check.set_defaults(fn=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if getattr(args, "units_required", False) and not args.units:
            raise ValueError("--units is required for this command")
        return args.fn(args)
    except (json.JSONDecodeError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SliceKitError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
