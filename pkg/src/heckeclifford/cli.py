"""Command-line front end.

Verbs: enumerate shapes, evaluate the separating polynomial, build a
module, verify a dumped module, run the counting census, run the
brute-force oracle.  All output is JSON on stdout (or --out); exit code
0 means pass, 1 means a verification ran and failed, 2 means the
request itself was unusable.
"""

import argparse
import json
import sys
from fractions import Fraction

from .modules import (
    DegenerateDenominator,
    NotSeparate,
    build_module,
    eigenvalue_audit,
    intertwiner_check,
    irreducibility_check,
    load_module,
    module_to_json,
    semisimplicity_census,
    verify_relations,
)
from .params import ParameterSet, separability_exact, separability_polynomial
from .pbw import BudgetExceeded, oracle_report
from .scalars import DEFAULT_PRECISION, Precision, format_scalar, parse_scalar
from .shapes import (
    Multipartition,
    count_standard_tableaux,
    enumerate_multipartitions,
    enumerate_standard_tableaux,
)


class UsageError(ValueError):
    """Bad flags or parameters; maps to exit code 2."""


def _precision(args) -> Precision:
    bits = getattr(args, "prec_bits", None)
    if bits is None:
        return DEFAULT_PRECISION
    # keep the comparison tolerance proportionally below the significand
    return Precision(bits=bits, epsilon=2.0 ** -(bits // 2))


def _scalar_arg(text: str, precision: Precision):
    """Rational when the literal allows it, so exact backends stay live."""
    try:
        return Fraction(text)
    except ValueError:
        return parse_scalar(text, precision)


def _params_from(args) -> ParameterSet:
    precision = _precision(args)
    q_text = getattr(args, "q", None)
    q = _scalar_arg(q_text, precision) if q_text is not None else None
    q_csv = getattr(args, "Q", None) or ""
    Q = tuple(_scalar_arg(tok.strip(), precision)
              for tok in q_csv.split(",") if tok.strip())
    m = getattr(args, "m", None)
    if m is not None and m != len(Q):
        raise UsageError(
            f"--m {m} disagrees with {len(Q)} cyclotomic parameters")
    try:
        return ParameterSet(args.variant, args.flavor, q=q, Q=Q,
                            precision=precision)
    except ValueError as err:
        raise UsageError(str(err)) from err


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2 if getattr(args, "out", None) else None)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_enumerate(args) -> int:
    shapes = enumerate_multipartitions(args.flavor, args.m, args.n)
    rows = []
    for shape in shapes:
        std = count_standard_tableaux(shape)
        d_count = len(shape.diagonal_boxes())
        row = shape.to_json()
        row["standard_tableaux"] = std
        row["dim"] = 2 ** (args.n - d_count // 2) * std
        row["type"] = "M" if d_count % 2 == 0 else "Q"
        if args.tableaux:
            row["tableaux"] = [t.to_json()
                               for t in enumerate_standard_tableaux(shape)]
        rows.append(row)
    _emit({"flavor": args.flavor, "m": args.m, "n": args.n,
           "count": len(rows), "shapes": rows}, args)
    return 0


def _cmd_poly(args) -> int:
    p = _params_from(args)
    value = separability_exact(p, args.n)
    if value is None:
        rendered = format_scalar(separability_polynomial(p, args.n),
                                 p.precision)
    else:
        rendered = str(value)
    _emit({"P": rendered}, args)
    return 0


def _cmd_build(args) -> int:
    p = _params_from(args)
    try:
        shape = Multipartition.from_json(args.shape, flavor=args.flavor)
    except (ValueError, KeyError, json.JSONDecodeError) as err:
        raise UsageError(f"bad shape: {err}") from err
    if shape.flavor != args.flavor:
        raise UsageError(
            f"shape flavor {shape.flavor!r} does not match --flavor")
    try:
        module = build_module(shape, p)
    except (NotSeparate, DegenerateDenominator, ValueError) as err:
        raise UsageError(str(err)) from err
    _emit(module_to_json(module), args)
    return 0


def _cmd_verify(args) -> int:
    try:
        module = load_module(args.path)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot load module: {err}") from err
    tol = args.tol
    shape = module.shape
    d_count = len(shape.diagonal_boxes())
    expected = 2 ** (shape.n - d_count // 2) * count_standard_tableaux(shape)
    report = {
        "relations": verify_relations(module, tol),
        "eigenvalues": eigenvalue_audit(module, tol),
        "irreducibility": irreducibility_check(module, seed=args.seed),
        "intertwiners": [intertwiner_check(module, i, tol)
                         for i in range(1, shape.n)],
        "dimension": {"expected": expected, "stored": module.total_dim,
                      "ok": expected == module.total_dim},
        "type": {"expected": "M" if d_count % 2 == 0 else "Q",
                 "stored": module.module_type,
                 "ok": (d_count % 2 == 0) == (module.module_type == "M")},
    }
    ok = all(part["ok"] for part in
             [report["relations"], report["eigenvalues"],
              report["irreducibility"], report["dimension"], report["type"]]
             + report["intertwiners"])
    report["ok"] = ok
    _emit(report, args)
    return 0 if ok else 1


def _cmd_census(args) -> int:
    p = _params_from(args)
    try:
        report = semisimplicity_census(p, args.n, jobs=args.jobs)
    except NotSeparate as err:
        raise UsageError(str(err)) from err
    _emit(report, args)
    return 0 if report["ok"] else 1


def _cmd_oracle(args) -> int:
    p = _params_from(args)
    try:
        report = oracle_report(p, args.n)
    except BudgetExceeded as err:
        raise UsageError(str(err)) from err
    _emit(report, args)
    return 0


def _add_param_flags(sub, with_n: bool = True) -> None:
    sub.add_argument("--variant", choices=("nondeg", "deg"), default="nondeg")
    sub.add_argument("--flavor", choices=("zero", "s", "ss"), required=True)
    sub.add_argument("--m", type=int, default=None,
                     help="cross-check against the number of --Q values")
    sub.add_argument("--q", default=None,
                     help="deformation parameter (nondeg only), e.g. 3/2")
    sub.add_argument("--Q", default=None,
                     help="comma-separated cyclotomic parameters")
    sub.add_argument("--prec-bits", type=int, default=None)
    if with_n:
        sub.add_argument("--n", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcsm",
        description="simple modules of cyclotomic Hecke-Clifford algebras")
    subs = parser.add_subparsers(dest="verb", required=True)

    sub = subs.add_parser("enumerate", help="list shapes of a given size")
    sub.add_argument("--flavor", choices=("zero", "s", "ss"), required=True)
    sub.add_argument("--m", type=int, default=0)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--tableaux", action="store_true",
                     help="include all standard tableaux")
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_enumerate)

    sub = subs.add_parser("poly", help="evaluate the separating polynomial")
    _add_param_flags(sub)
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_poly)

    sub = subs.add_parser("build", help="build one module and dump it")
    _add_param_flags(sub, with_n=False)
    sub.add_argument("--lambda", dest="shape", required=True,
                     help="shape as JSON, e.g. '[[2]]'")
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_build)

    sub = subs.add_parser("verify", help="verify a dumped module")
    sub.add_argument("path")
    sub.add_argument("--tol", type=float, default=1e-25)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_verify)

    sub = subs.add_parser("census", help="counting identity over all shapes")
    _add_param_flags(sub)
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_census)

    sub = subs.add_parser("oracle", help="brute-force regular representation")
    _add_param_flags(sub)
    sub.add_argument("--out", default=None)
    sub.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"hcsm: {err}", file=sys.stderr)
        return 2
    except BudgetExceeded as err:
        print(f"hcsm: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
