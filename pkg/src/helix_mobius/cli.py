"""
Command-line entry point ``helix-mobius``.

Every subcommand emits a table, either CSV (default) or JSON of the form
``{"command": ..., "rows": [...]}``. Floats are written with 17
significant digits in CSV; JSON uses Python's shortest round-trip repr,
with NaN mapped to ``null``. Exit status is 0 on success, 1 when a
computation fails and 2 for usage errors; failures also print a JSON error
record ``{"error": {"kind", "message"}}`` to stderr.

``HELIX_MOBIUS_SEED`` is reserved and ignored: nothing here is random.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .asymptotics import asymptotic_report
from .contour_checks import arc_integral, closed_contour_check, contour_radius, side_integral
from .curve_energy import mobius_gradient_field, pointwise_energy, read_curve_csv
from .exceptions import DomainError, HelixMobiusError
from .quadrature import integrate_density
from .residue_series import approx_sum, residue_sum
from .roots import curve_oracle_many, refine_roots

__all__ = ["main", "build_parser", "format_rows"]

ROOT_COLUMNS = ["k", "re_w", "im_w", "re_z", "im_z", "rouche_r", "err_bound", "abs_err", "certified"]
ORACLE_COLUMNS = ["re_oracle", "im_oracle", "oracle_diff"]
SWEEP_COLUMNS = ["rho", "i_quad", "i_res", "i_tilde", "ref_small", "ref_large_lo", "ref_large_hi",
                 "ratio_small", "ratio_large"]
ESTIMATE_COLUMNS = ["rho", "value", "method", "tail_bound", "tolerance", "error_estimate", "cutoff",
                    "certified"]
CHECK_COLUMNS = ["suite", "check", "passed", "measured", "threshold", "margin"]
CONTOUR_COLUMNS = ["rho", "k", "radius", "side", "arc", "contour_re", "contour_im", "residue_total",
                   "abs_diff", "passed"]
DENSITY_COLUMNS = ["s", "value", "j", "p", "error_estimate"]
GRADIENT_COLUMNS = ["t", "gx", "gy", "gz"]


class UsageError(Exception):
    """Bad arguments detected after parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", default=None, help="output path (default stdout)")
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1,
                        help="worker threads; affects speed only")

    p = _Parser(prog="helix-mobius", description="Moebius energy density of the helix.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("density", parents=[common], help="I(rho) by real-line quadrature")
    s.add_argument("--rho", type=_positive_float, required=True)
    s.add_argument("--tol", type=_positive_float, default=1e-9)

    s = sub.add_parser("roots", parents=[common], help="strip roots z_k with certificates")
    s.add_argument("--rho", type=_positive_float, required=True)
    s.add_argument("--kmax", type=_positive_int, required=True)
    s.add_argument("--oracle", action="store_true", help="add the bisection oracle columns")

    s = sub.add_parser("series", parents=[common], help="I(rho) by residue series")
    s.add_argument("--rho", type=_positive_float, required=True)
    s.add_argument("--tol", type=_positive_float, default=1e-9)
    s.add_argument("--approx", action="store_true", help="closed-form series over w_k instead")

    s = sub.add_parser("sweep", parents=[common], help="three methods against the asymptotics")
    s.add_argument("--rho-min", type=_positive_float, required=True)
    s.add_argument("--rho-max", type=_positive_float, required=True)
    s.add_argument("--steps", type=_positive_int, required=True)
    s.add_argument("--grid", choices=["log", "linear"], default="log")
    s.add_argument("--tol", type=_positive_float, default=1e-8)

    s = sub.add_parser("verify", parents=[common], help="named verification suites")
    s.add_argument("--suite", choices=["all", "sandwich", "roots", "transfer", "brackets", "cross"],
                   default="all")

    s = sub.add_parser("contour", parents=[common], help="side, arc and closed-contour integrals")
    s.add_argument("--rho", type=_positive_float, required=True)
    s.add_argument("--kmax", type=_positive_int, required=True)

    s = sub.add_parser("curve", parents=[common], help="energy density or gradient of a sampled curve")
    s.add_argument("--input", required=True, help="CSV with columns t,x,y,z[,tx,ty,tz]")
    s.add_argument("--j", type=float, default=2.0)
    s.add_argument("--p", type=float, default=1.0)
    s.add_argument("--tol", type=_positive_float, default=1e-8)
    s.add_argument("--gradient", action="store_true", help="Moebius gradient instead of the density")
    return p


# -- subcommands -------------------------------------------------------------

def _cmd_density(a):
    return ESTIMATE_COLUMNS, [integrate_density(a.rho, a.tol).as_row()]


def _cmd_series(a):
    est = approx_sum(a.rho, a.tol) if a.approx else residue_sum(a.rho, a.tol)
    return ESTIMATE_COLUMNS, [est.as_row()]


def _cmd_roots(a):
    ks = np.arange(1, a.kmax + 1)
    w, z, r, bound, cert, _ = refine_roots(a.rho, ks)
    rows = []
    for i, k in enumerate(ks):
        rows.append({"k": int(k), "re_w": w[i].real, "im_w": w[i].imag, "re_z": z[i].real,
                     "im_z": z[i].imag, "rouche_r": r[i], "err_bound": bound[i],
                     "abs_err": abs(z[i] - w[i]), "certified": bool(cert[i])})
    cols = list(ROOT_COLUMNS)
    if a.oracle:
        oracle = curve_oracle_many(a.rho, ks)
        for row, zo, zi in zip(rows, oracle, z):
            row.update(re_oracle=zo.real, im_oracle=zo.imag, oracle_diff=abs(zo - zi))
        cols += ORACLE_COLUMNS
    return cols, rows


def _cmd_sweep(a):
    if a.rho_max < a.rho_min or (a.steps > 1 and a.rho_max == a.rho_min):
        raise UsageError("--rho-max must exceed --rho-min")
    if a.steps == 1:
        grid = [a.rho_min]
    elif a.grid == "log":
        grid = np.geomspace(a.rho_min, a.rho_max, a.steps).tolist()
    else:
        grid = np.linspace(a.rho_min, a.rho_max, a.steps).tolist()
    reports = asymptotic_report(grid, a.tol, threads=a.threads)
    return SWEEP_COLUMNS, [r.as_row() for r in reports]


def _cmd_verify(a):
    from .verify import run_suite
    return CHECK_COLUMNS, [r.as_row() for r in run_suite(a.suite)]


def _cmd_contour(a):
    rows = []
    for k in range(1, a.kmax + 1):
        rep = closed_contour_check(a.rho, k)
        rows.append({"rho": a.rho, "k": k, "radius": contour_radius(k),
                     "side": side_integral(a.rho, k), "arc": arc_integral(a.rho, k),
                     "contour_re": rep.contour_total.real, "contour_im": rep.contour_total.imag,
                     "residue_total": rep.residue_total, "abs_diff": rep.abs_diff,
                     "passed": rep.passed})
    return CONTOUR_COLUMNS, rows


def _cmd_curve(a):
    try:
        curve = read_curve_csv(a.input)
    except OSError as exc:
        raise UsageError(f"cannot read {a.input}: {exc.strerror}") from None
    params = curve.params[:-1] if curve.closed else curve.params
    if a.gradient:
        rows = []
        for t in params:
            g = mobius_gradient_field(curve, float(t), a.tol)
            rows.append({"t": float(t), "gx": g[0], "gy": g[1], "gz": g[2]})
        return GRADIENT_COLUMNS, rows
    rows = []
    for s in params:
        v = pointwise_energy(curve, float(s), a.j, a.p, a.tol)
        rows.append({"s": v.s, "value": float(v.value), "j": v.j, "p": v.p,
                     "error_estimate": float(v.error_estimate)})
    return DENSITY_COLUMNS, rows


_COMMANDS = {
    "density": _cmd_density, "roots": _cmd_roots, "series": _cmd_series, "sweep": _cmd_sweep,
    "verify": _cmd_verify, "contour": _cmd_contour, "curve": _cmd_curve,
}


# -- output ------------------------------------------------------------------

def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def format_rows(command: str, columns: Sequence[str], rows: Sequence[dict], fmt: str) -> str:
    """Render a table as CSV or JSON text."""
    if fmt == "json":
        doc = {"command": command, "rows": [{c: _json_value(r.get(c)) for c in columns} for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"kind": kind, "message": message}}) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        columns, rows = _COMMANDS[args.command](args)
    except UsageError as exc:
        _error("UsageError", str(exc))
        return 2
    except DomainError as exc:
        _error(type(exc).__name__, str(exc))
        return 2
    except HelixMobiusError as exc:
        _error(type(exc).__name__, str(exc))
        return 1
    except (ArithmeticError, ValueError) as exc:
        _error(type(exc).__name__, str(exc))
        return 1

    text = format_rows(args.command, columns, rows, args.format)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and not all(r["passed"] for r in rows):
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
