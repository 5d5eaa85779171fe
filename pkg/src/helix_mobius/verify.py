"""
Named verification suites: each check reports the measured quantity, the
threshold it is compared against, and the signed margin (positive means
pass).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .asymptotics import (NON_TANGENCY_C, PERTURB_COEF, g_bracket, g_series, h_bound,
                          h_series, transfer_check)
from .quadrature import integrate_density
from .residue_series import approx_terms, residue_sum, residue_terms
from .roots import count_zeros_rectangle, curve_oracle_many, refine_roots
from .special_functions import solve_alpha_beta, solve_ck

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    check: str
    passed: bool
    measured: float
    threshold: float
    margin: float

    def as_row(self) -> dict:
        return asdict(self)


def _le(suite, name, measured, threshold):
    return CheckResult(suite, name, bool(measured <= threshold), float(measured), float(threshold),
                       float(threshold - measured))


def _ge(suite, name, measured, threshold):
    return CheckResult(suite, name, bool(measured >= threshold), float(measured), float(threshold),
                       float(measured - threshold))


def suite_sandwich() -> list[CheckResult]:
    out = []
    for rho in (2.0, 5.0, 10.0, 50.0):
        v = integrate_density(rho, 1e-9).value
        out.append(_ge("sandwich", f"rho={rho:g} lower", v, math.pi / (3 * (rho * rho + 1))))
        out.append(_le("sandwich", f"rho={rho:g} upper", v, math.pi / (3 * rho * rho)))
    return out


def suite_roots() -> list[CheckResult]:
    out = []
    ks = np.arange(1, 10_001)
    for rho in (0.01, 0.05):
        w, z, _, bound, cert, _ = refine_roots(rho, ks)
        out.append(_le("roots", f"rho={rho:g} max |z-w|/bound", float(np.max(np.abs(z - w) / bound)), 1.0))
        out.append(_ge("roots", f"rho={rho:g} certified fraction", float(np.mean(cert)), 1.0))
        oracle = curve_oracle_many(rho, ks[:100])
        out.append(_le("roots", f"rho={rho:g} newton vs oracle", float(np.max(np.abs(oracle - z[:100]))), 1e-9))
    for rho in (0.05, 1.0, 2.0):
        counts = [count_zeros_rectangle(rho, k) for k in (1, 10, 50)]
        out.append(_le("roots", f"rho={rho:g} strip count deviation", max(abs(c - 1) for c in counts), 0))
    return out


def suite_transfer() -> list[CheckResult]:
    out = []
    ks = np.arange(1, 10_001)
    for rho in (0.01, 0.05, 0.5, 1.0):
        rep = transfer_check(approx_terms(rho, ks))
        out.append(_ge("transfer", f"rho={rho:g} w-series sign", float(rep.sign_ok), 1.0))
        out.append(_ge("transfer", f"rho={rho:g} w-series c", rep.c_empirical, NON_TANGENCY_C))
    for rho in (0.01, 0.05):
        _, z, _, _, _, _ = refine_roots(rho, ks)
        rep = transfer_check(residue_terms(rho, z))
        out.append(_ge("transfer", f"rho={rho:g} z-series sign", float(rep.sign_ok), 1.0))
        out.append(_ge("transfer", f"rho={rho:g} z-series c", rep.c_empirical,
                       NON_TANGENCY_C - PERTURB_COEF * rho))
    return out


def suite_brackets() -> list[CheckResult]:
    out = []
    for rho in (1e-6, 1e-4, 1e-2, 1.0):
        gap = g_series(rho) - math.log(1 / rho)
        lo, hi = g_bracket(rho)
        out.append(_ge("brackets", f"rho={rho:g} G lower", gap, lo))
        out.append(_le("brackets", f"rho={rho:g} G upper", gap, hi))
    for rho in (1e-4, 1e-2, 0.1):
        out.append(_le("brackets", f"rho={rho:g} H bound", h_series(rho), h_bound(rho)))
    ab = solve_alpha_beta()
    out.append(_le("brackets", "beta", abs(ab.beta - 1.1997), 5e-4))
    out.append(_le("brackets", "alpha", abs(ab.alpha - 0.6627), 5e-4))
    out.append(_le("brackets", "c_1", abs(solve_ck(1).value - 2.7984), 5e-4))
    return out


def suite_cross() -> list[CheckResult]:
    out = []
    for rho in (0.05, 0.1, 0.5, 1.0):
        q = integrate_density(rho, 1e-9).value
        r = residue_sum(rho, 1e-8, relative=True).value
        out.append(_le("cross", f"rho={rho:g} relative gap", abs(r - q) / q, 1e-6))
    return out


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "sandwich": suite_sandwich,
    "roots": suite_roots,
    "transfer": suite_transfer,
    "brackets": suite_brackets,
    "cross": suite_cross,
}


def run_suite(name: str = "all") -> list[CheckResult]:
    if name == "all":
        return [r for fn in SUITES.values() for r in fn()]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
