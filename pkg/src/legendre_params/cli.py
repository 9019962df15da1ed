"""Command-line front end: ``legendre-params {eval,deriv,check}``.

Records go out as JSON Lines (one object per line, fixed key order, floats in
shortest round-trip form) or as CSV with a fixed header.  Exit codes:

====  ====================================================
0     success / every check case passed
1     at least one check case failed (or did not converge)
2     domain error, or unreadable grid file
3     pole error
64    malformed command line
====  ====================================================
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

from legendre_params import oracle
from legendre_params.errors import DomainError, LegendreError, PoleError
from legendre_params.legendre import ParamPoint, legendre_p, legendre_q
from legendre_params.param_derivs import DerivRequest, baseline, evaluate, special_case_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_POLE = 3
EXIT_USAGE = 64

CSV_HEADER = ("function", "nu_re", "nu_im", "mu_re", "mu_im", "z_re", "z_im", "value_re", "value_im",
              "method", "err", "oracle_re", "oracle_im", "rel_disc")
TOL_ENV = "LEGENDRE_CHECK_TOL"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def parse_complex(text: str) -> complex:
    """``"a"`` or ``"a,b"`` (real, imaginary)."""
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected a or a,b, got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return complex(values[0], values[1] if len(values) == 2 else 0.0)


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return value


_ERROR_TAGS = {
    "DomainError": "domain-error",
    "PoleError": "pole-error",
    "ConvergenceError": "convergence-error",
    "EvaluationError": "evaluation-error",
    "OverflowError": "overflow-error",
}


def _error_tag(exc: BaseException | str) -> str:
    name = exc.split(":", 1)[0] if isinstance(exc, str) else type(exc).__name__
    return _ERROR_TAGS.get(name, "error")


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, PoleError):
        return EXIT_POLE
    if isinstance(exc, DomainError):
        return EXIT_DOMAIN
    return EXIT_FAIL


# Records

def _pair(x: complex | None):
    return None if x is None else [_num(x.real), _num(x.imag)]


def _num(x: float | None):
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def make_record(function: str, nu: complex, mu: complex, z: complex, value: complex | None,
                method: str, err: float | None, oracle_value: complex | None = None) -> dict:
    rec = {
        "function": function,
        "nu": _pair(complex(nu)),
        "mu": _pair(complex(mu)),
        "z": _pair(complex(z)),
        "value": _pair(value),
        "method": method,
        "err_estimate": _num(err),
        "oracle_value": None,
        "rel_discrepancy": None,
    }
    if oracle_value is not None:
        rec["oracle_value"] = _pair(oracle_value)
        if value is not None:
            rec["rel_discrepancy"] = _num(abs(value - oracle_value) / max(abs(oracle_value), 1e-300))
    return rec


def _csv_cell(x) -> str:
    return "" if x is None else repr(x)


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r, allow_nan=False) + "\n" for r in records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        row = [r["function"]]
        for key in ("nu", "mu", "z", "value"):
            row += [_csv_cell(v) for v in (r[key] or (None, None))]
        row += [r["method"], _csv_cell(r["err_estimate"])]
        row += [_csv_cell(v) for v in (r["oracle_value"] or (None, None))]
        row.append(_csv_cell(r["rel_discrepancy"]))
        writer.writerow(row)
    return buf.getvalue()


def write_output(text: str, out: str | None) -> None:
    """Write to stdout, or atomically replace ``out``."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(prefix=".legendre-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# Subcommands

def cmd_eval(args) -> tuple[list[dict], int]:
    nu, mu, z = args.nu, args.mu, args.z
    try:
        point = ParamPoint(nu, mu, z)
        evaluator = legendre_p if args.fn == "P" else legendre_q
        result = evaluator(point)
        ref = None
        if args.oracle == "quad":
            quad = oracle.quad_legendre_p if args.fn == "P" else oracle.quad_legendre_q
            ref = quad(nu, mu, z).value
        elif args.oracle == "fd":
            if nu.imag != 0.0:
                raise DomainError("the fd oracle steps the degree along the real axis; needs real nu")
            f = lambda x: evaluator(ParamPoint(complex(x, 0.0), mu, z)).value
            ref = oracle.fd_neighbour_average(f, nu.real).value
    except (LegendreError, OverflowError) as exc:
        print(f"{args.fn}: {exc}", file=sys.stderr)
        return [make_record(args.fn, nu, mu, z, None, _error_tag(exc), None)], _exit_code(exc)
    return [make_record(args.fn, nu, mu, z, result.value, result.method, result.err_estimate, ref)], EXIT_OK


def cmd_deriv(args) -> tuple[list[dict], int]:
    sign = 1 if args.sign == "+" else -1
    wrt = args.wrt
    function = f"d{args.fn}/d{'mu' if wrt == 'order' else 'nu'}"
    nu, mu = _raw_degree_order(wrt, args.free, args.at_int, sign)
    try:
        req = DerivRequest(args.fn, wrt, args.free, args.at_int, sign, args.z)
        result = evaluate(req)
        ref = None
        if args.oracle == "fd":
            ref = oracle.fd_param_derivative(baseline(req), float(sign * args.at_int)).value
        elif args.oracle == "quad":
            if not oracle.quad_oracle_applies(req):
                raise DomainError(f"no convergent integral representation for {function} here")
            ref = oracle.QUAD_ORACLES[req.target, req.with_respect_to](req).value
    except (LegendreError, OverflowError) as exc:
        print(f"{function}: {exc}", file=sys.stderr)
        return [make_record(function, nu, mu, args.z, None, _error_tag(exc), None)], _exit_code(exc)
    return [make_record(function, nu, mu, args.z, result.value, result.method, result.err_estimate, ref)], EXIT_OK


def _raw_degree_order(wrt: str, free: complex, k: int, sign: int) -> tuple[complex, complex]:
    # Legendre degree and order at the evaluation point of P_{nu-1/2}^mu
    if wrt == "order":
        return complex(free) - 0.5, complex(sign * k)
    return complex(sign * k - 0.5), complex(free)


class GridError(Exception):
    pass


def _grid_number(value, what: str) -> complex:
    if isinstance(value, bool):
        raise GridError(f"{what}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise GridError(f"{what}: expected a number or [re, im], got {value!r}")


def parse_grid_entry(entry, index: int) -> tuple:
    """Structural validation of one grid object; mathematical validity is
    left to the per-case run."""
    where = f"grid entry {index}"
    if not isinstance(entry, dict):
        raise GridError(f"{where}: expected an object")
    missing = {"target", "with_respect_to", "fixed_param", "eval_int", "z"} - entry.keys()
    if missing:
        raise GridError(f"{where}: missing {sorted(missing)}")
    target, wrt = entry["target"], entry["with_respect_to"]
    if target not in ("P", "Q") or wrt not in ("degree", "order"):
        raise GridError(f"{where}: bad target/with_respect_to {target!r}/{wrt!r}")
    k = entry["eval_int"]
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise GridError(f"{where}: eval_int must be a nonnegative integer")
    sign = entry.get("sign", 1)
    sign = {1: 1, -1: -1, "+": 1, "-": -1}.get(sign) if not isinstance(sign, bool) else None
    if sign is None:
        raise GridError(f"{where}: sign must be 1, -1, '+' or '-'")
    return (target, wrt, _grid_number(entry["fixed_param"], where), k, sign,
            _grid_number(entry["z"], where))


def load_grid(path: str) -> list[tuple]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise GridError(f"cannot read grid {path}: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise GridError(f"grid {path} must be a non-empty JSON list")
    return [parse_grid_entry(e, i) for i, e in enumerate(data)]


def check_tolerances() -> tuple[float, float]:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw == "":
        return oracle.FD_TOL, oracle.QUAD_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV} must be a number, got {raw!r}") from None
    if not (0.0 < tol < 1.0):
        raise UsageError(f"{TOL_ENV} must lie in (0, 1), got {raw!r}")
    return tol, tol


def _case_records(case: oracle.CaseResult) -> list[dict]:
    target, wrt, free, k, sign, z = case.fields
    function = f"d{target}/d{'mu' if wrt == 'order' else 'nu'}"
    nu, mu = _raw_degree_order(wrt, free, k, sign)
    if case.error is not None:
        return [make_record(function, nu, mu, z, None, _error_tag(case.error), None)]
    cf = case.closed_form
    out = []
    for ref in (case.fd, case.quadrature):
        if ref is not None:
            out.append(make_record(function, nu, mu, z, cf.value, f"{cf.method}|{ref.method}",
                                   cf.err_estimate, ref.value))
    return out


def cmd_check(args) -> tuple[list[dict], int]:
    fd_tol, quad_tol = check_tolerances()
    if args.grid is not None:
        try:
            grid = load_grid(args.grid)
        except GridError as exc:
            print(str(exc), file=sys.stderr)
            return [], EXIT_DOMAIN
    else:
        grid = oracle.default_grid()
    report = oracle.conformance_run(grid, fd_tol=fd_tol, quad_tol=quad_tol)
    records = [rec for case in report.cases for rec in _case_records(case)]
    total, failed = len(report), len(report.failures)
    if args.grid is None:
        suite = special_case_suite()
        for sc in suite.cases:
            r = sc.request
            function = f"special:{r.family}"
            if sc.error is not None:
                records.append(make_record(function, r.degree, r.order, r.z, None, _error_tag(sc.error), None))
            else:
                records.append(make_record(function, r.degree, r.order, r.z, sc.general,
                                           "closed-form|displayed", None, sc.displayed))
        total += len(suite.cases)
        failed += sum(not sc.passed for sc in suite.cases)
    print(f"check: {total} cases, {failed} failed", file=sys.stderr)
    return records, EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="legendre-params",
                     description="Associated Legendre functions and their parameter derivatives.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write here (atomically) instead of stdout")

    p = sub.add_parser("eval", help="evaluate P_nu^mu(z) or Q_nu^mu(z)")
    p.add_argument("--fn", choices=("P", "Q"), required=True)
    p.add_argument("--nu", type=parse_complex, required=True, metavar="A[,B]")
    p.add_argument("--mu", type=parse_complex, required=True, metavar="A[,B]")
    p.add_argument("--z", type=parse_complex, required=True, metavar="A[,B]")
    p.add_argument("--oracle", choices=("quad", "fd", "none"), default="none")
    common(p)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("deriv", help="closed-form derivative in degree or order")
    p.add_argument("--fn", choices=("P", "Q"), required=True)
    p.add_argument("--wrt", choices=("degree", "order"), required=True)
    p.add_argument("--at-int", type=_nonneg_int, required=True, metavar="M")
    p.add_argument("--sign", choices=("+", "-"), default="+")
    p.add_argument("--free", type=parse_complex, required=True, metavar="A[,B]")
    p.add_argument("--z", type=parse_complex, required=True, metavar="A[,B]")
    p.add_argument("--oracle", choices=("fd", "quad", "none"), default="none")
    common(p)
    p.set_defaults(handler=cmd_deriv)

    p = sub.add_parser("check", help="conformance run against quadrature and finite differences")
    p.add_argument("--grid", default=None, metavar="FILE", help="JSON list of requests")
    common(p)
    p.set_defaults(handler=cmd_check)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        records, code = args.handler(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    if records or args.command != "check":
        write_output(render(records, args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
