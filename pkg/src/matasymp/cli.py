"""Command-line driver: ``matasymp eval | verify | sweep``.

Exit codes: 0 success, 1 failed verification, 2 precondition violation
(the error class name is printed on stderr).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import expansions as ex
from . import matcore as mc
from . import oracle as orc
from . import specfun as sf
from . import verify as vf
from .errors import MatasympError

EVAL_FUNCTIONS = ("gamma", "gamma_stirling", "bessel_j", "bessel_i", "kummer", "kummer_asym",
                  "watson", "laplace")
STUDIES = ("watson_order", "laplace_order", "gamma_bound", "bessel_ratio", "kummer_order")
SUITES = ("matcore", "expansions", "specfun", "all")


class UsageError(Exception):
    pass


def parse_params(text: str | None) -> dict[str, str]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _num(params: dict, key: str, default=None) -> complex | float:
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter {key!r}")
        return default
    z = complex(params[key].replace(" ", ""))
    return z.real if z.imag == 0 else z


def parse_scales(text: str | None) -> list[float]:
    if not text:
        return []
    return [float(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# eval

def evaluate(function: str, A: np.ndarray, params: dict, n_terms: int) -> tuple[np.ndarray, dict]:
    """Dispatch one ``eval`` function; returns the matrix and extra JSON fields."""
    extra: dict = {}
    if function == "gamma":
        return sf.gamma_matrix(A), extra
    if function == "gamma_stirling":
        r = sf.gamma_stirling(A, int(_num(params, "N", n_terms)), theta=float(_num(params, "theta", 0.0)))
    elif function in ("bessel_j", "bessel_i"):
        spec = sf.BesselSpec("J" if function == "bessel_j" else "I", _num(params, "z", 1.0))
        return sf.bessel_integral(A, spec), extra
    elif function == "kummer":
        p = sf.KummerParams(_num(params, "a"), _num(params, "b"))
        return sf.kummer_series(p, A), extra
    elif function == "kummer_asym":
        p = sf.KummerParams(_num(params, "a"), _num(params, "b"))
        r = sf.kummer_asymptotic(p, A, n_terms, int(_num(params, "sign", -1)))
    elif function == "watson":
        inp = ex.builtin_watson(params.get("f", "reciprocal_1p"))
        r = ex.evaluate_expansion(A, ex.watson_terms(inp, n_terms + 1), n_terms)
    elif function == "laplace":
        r = ex.laplace_evaluate(A, ex.builtin_laplace(params.get("problem", "gaussian")), n_terms)
    else:
        raise UsageError(f"unknown function {function!r}")
    extra = {"n_terms": r.n_terms, "first_omitted_norm": r.first_omitted_norm}
    return r.value, extra


def cmd_eval(args) -> int:
    A = mc.load_matrix(args.matrix)
    params = parse_params(args.params)
    value, extra = evaluate(args.function, A, params, args.terms)
    doc = mc.matrix_to_json(value)
    with np.printoptions(precision=12, linewidth=120):
        print(value)
    summary = {"function": args.function, "result": doc, **extra}
    if args.out:
        Path(args.out).write_text(json.dumps(doc))
    print(json.dumps(summary))
    return 0


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    checks = vf.run(args.suite, args.seed)
    ok = True
    for c in checks:
        if args.tol is not None and c.tolerance < 1e-6:
            c = vf._check(c.name, c.measured, args.tol)
        ok &= c.passed
        print(c.line())
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# sweep

@dataclass(frozen=True)
class SweepRecord:
    scale: float
    inv_norm: float
    truncation_error: float
    bound_value: float
    n_terms: int


def _sweep_rows(study: str, base: np.ndarray, scales: list[float], n_terms: int,
                params: dict) -> list[SweepRecord]:
    rows = []
    if study == "watson_order":
        inp = ex.builtin_watson(params.get("f", "reciprocal_1p"))
        terms = ex.watson_terms(inp, n_terms + 1)

        def oracle(A):
            return orc.matrix_laplace_quadrature(inp.evaluator, A, endpoint_exponent=min(inp.endpoint_exponent, 0.0),
                                                 epsabs=0.0, epsrel=1e-14)

        def approx(A):
            return ex.evaluate_expansion(A, terms, n_terms).value
    elif study == "laplace_order":
        prob = ex.builtin_laplace(params.get("problem", "x_plus_x2"))

        def oracle(A):
            return orc.matrix_laplace_quadrature(prob.phi, A, prob.interval, h=prob.h, epsabs=0.0, epsrel=1e-14)

        def approx(A):
            return ex.laplace_evaluate(A, prob, n_terms).value
    elif study == "gamma_bound":
        for s in scales:
            A = s * base
            err = vf.gamma_remainder(A, n_terms)
            rows.append(SweepRecord(s, mc.inv_norm(A), err, sf.gamma_remainder_bound(A, n_terms), n_terms))
        return rows
    elif study == "bessel_ratio":
        z = _num(params, "z", 1.0)
        kind = params.get("kind", "J")
        for s in scales:
            dev = vf.bessel_ratio_deviation(base, [s], z, kind)[0]
            rows.append(SweepRecord(s, mc.inv_norm(s * base), dev, math.nan, n_terms))
        return rows
    elif study == "kummer_order":
        p = sf.KummerParams(_num(params, "a", 0.7), _num(params, "b", 1.9))
        sign = int(_num(params, "sign", -1))

        def oracle(A):
            return orc.lift_scalar(lambda z: orc.hyp1f1_reference(p.a, p.b, sign * z), A)

        def approx(A):
            return sf.kummer_asymptotic(p, A, n_terms, sign).value
    else:
        raise UsageError(f"unknown study {study!r}")

    for s in scales:
        A = s * base
        try:
            exact = oracle(A)
        except MatasympError as exc:
            raise ex.OracleFailure(str(exc)) from exc
        rows.append(SweepRecord(s, mc.inv_norm(A), mc.norm2(exact - approx(A)), math.nan, n_terms))
    return rows


def _fmt(x: float) -> str:
    return "" if isinstance(x, float) and math.isnan(x) else f"{x:.17g}"


def write_sweep_csv(rows: list[SweepRecord], stream) -> float:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["scale", "inv_norm", "truncation_error", "bound_value", "n_terms"])
    for r in sorted(rows, key=lambda r: r.scale):
        w.writerow([_fmt(r.scale), _fmt(r.inv_norm), _fmt(r.truncation_error), _fmt(r.bound_value), r.n_terms])
    xs = np.array([r.scale for r in rows])
    ys = np.array([r.truncation_error for r in rows])
    slope = math.nan
    if len(rows) >= 2 and np.all(ys > 0):
        slope = float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
    w.writerow(["slope", _fmt(slope), "", "", ""])
    return slope


def cmd_sweep(args) -> int:
    scales = parse_scales(args.scales)
    if not scales:
        raise UsageError("--scales must list at least one scale")
    if any(s <= 0 for s in scales):
        raise UsageError("scales must be positive")
    base = mc.load_matrix(args.matrix)
    rows = _sweep_rows(args.study, base, scales, args.terms, parse_params(args.params))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            slope = write_sweep_csv(rows, fh)
    else:
        slope = write_sweep_csv(rows, sys.stdout)
    print(f"slope: {slope:.6g}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matasymp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--matrix", help="matrix JSON file")
        p.add_argument("--out", help="output path")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--terms", type=int, default=3)
        p.add_argument("--scales", help="comma-separated scale list")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--params", help="k=v,... parameters")

    p = sub.add_parser("eval", help="evaluate a matrix function")
    p.add_argument("function", choices=EVAL_FUNCTIONS)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", choices=SUITES)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="scaling study written as CSV")
    p.add_argument("study", choices=STUDIES)
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("eval", "sweep") and not args.matrix:
        print("UsageError: --matrix is required", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except MatasympError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, KeyError, OSError, np.linalg.LinAlgError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
