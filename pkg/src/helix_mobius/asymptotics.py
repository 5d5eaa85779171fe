"""
Asymptotic references, brackets and the transfer-condition checker.

``G(rho) = sum_k 1/(k sqrt((k pi rho)^2 + 1))`` carries the leading
``log(1/rho)`` behaviour of the approximate series and satisfies

    log((1 + s)/pi) <= G(rho) - log(1/rho) <= log((1 + s)/pi) + 1/s,

``s = sqrt((pi rho)^2 + 1)``. ``H(rho) = sum_k 2 rho/(k((k pi rho)^2 + 1))``
bounds the termwise gap between ``Re 1/(k D_k)`` and the ``G`` terms.

Both series have positive, decreasing, convex term functions ``f``. The
tail past ``K`` is taken as ``int_{K+1/2}^inf f`` minus half of the
convexity window ``|f'(K + 1/2)|/8``, which bounds the error.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DomainError, HelixMobiusError, ToleranceNotReached
from .kernel import as_rho
from .quadrature import integrate_density
from .residue_series import K_CAP, approx_sum, d_k, residue_sum

__all__ = [
    "AsymptoticReport",
    "NON_TANGENCY_C",
    "TransferReport",
    "asymptotic_report",
    "dk_decomposition",
    "g_bracket",
    "g_series",
    "h_bound",
    "h_series",
    "large_rho_band",
    "small_rho_band",
    "transfer_check",
]

NON_TANGENCY_C = math.pi / math.sqrt(math.pi**2 + 1)
QUAD_RHO_MIN = 1e-3
PERTURB_COEF = 11 * math.sqrt(5)
SERIES_TOL_MAX = 1e-4


def _convex_tail_sum(f, fprime, tail_integral, tol, k_cap=K_CAP):
    """
    Sum ``f(1) + f(2) + ...`` for a positive decreasing convex ``f``.

    Returns ``(value, error_bound, K)``.
    """
    K = 64
    while True:
        bound = abs(fprime(K + 0.5)) / 16.0
        if bound <= tol:
            break
        if K >= k_cap:
            raise ToleranceNotReached(f"series needs more than {k_cap} terms for tol={tol:g}")
        K = min(4 * K, k_cap)
    ks = np.arange(1, K + 1, dtype=float)
    head = math.fsum(f(ks).tolist())
    tail = tail_integral(K + 0.5) - bound
    return head + tail, bound, K


def g_series(rho, tol: float = 1e-12) -> float:
    """
    ``G(rho)``, with the tail integrated in closed form.

    ``int_a^inf dt / (t sqrt((pi rho t)^2 + 1)) = arcsinh(1/(pi rho a))``.
    """
    rho = as_rho(rho)
    if not tol > 0:
        raise DomainError("tol must be positive")
    c = (math.pi * rho) ** 2

    def f(t):
        return 1.0 / (t * np.sqrt(c * t * t + 1.0))

    def fp(t):
        q = c * t**4 + t * t
        return -0.5 * (4 * c * t**3 + 2 * t) / q**1.5

    val, _, _ = _convex_tail_sum(f, fp, lambda a: math.asinh(1.0 / (math.pi * rho * a)), tol)
    return val


def g_bracket(rho) -> tuple[float, float]:
    """Closed-form bracket for ``G(rho) - log(1/rho)``."""
    rho = as_rho(rho)
    s = math.hypot(math.pi * rho, 1.0)
    lo = math.log((1.0 + s) / math.pi)
    return lo, lo + 1.0 / s


def h_series(rho, tol: float = 1e-12) -> float:
    """``H(rho)``; ``int_a^inf 2 rho dt/(t((pi rho t)^2 + 1)) = rho log(1 + 1/(pi rho a)^2)``."""
    rho = as_rho(rho)
    if not tol > 0:
        raise DomainError("tol must be positive")
    c = (math.pi * rho) ** 2

    def f(t):
        return 2 * rho / (t * (c * t * t + 1.0))

    def fp(t):
        q = c * t**3 + t
        return -2 * rho * (3 * c * t * t + 1.0) / q**2

    val, _, _ = _convex_tail_sum(f, fp, lambda a: rho * math.log1p(1.0 / (c * a * a)), tol)
    return val


def h_bound(rho) -> float:
    """``2 rho (1 + log(1/(pi rho)) + log(1 + (pi rho)^2)/2)``."""
    rho = as_rho(rho)
    return 2 * rho * (1 + math.log(1 / (math.pi * rho)) + 0.5 * math.log1p((math.pi * rho) ** 2))


def dk_decomposition(rho, k: int) -> complex:
    """``D_k(rho) = rho arcsinh(k pi rho)/(k pi) + sqrt((k pi rho)^2 + 1) - i rho``."""
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    return d_k(rho, int(k))


@dataclass(frozen=True)
class TransferReport:
    """Sign and non-tangency data of a term sequence."""

    sign_ok: bool
    sign: int
    c_empirical: float
    n_terms: int


def transfer_check(terms: Iterable[complex]) -> TransferReport:
    """
    Check that all imaginary parts share a strict sign and report
    ``c_empirical = min |Im b_k| / |b_k|``.
    """
    b = np.asarray(list(terms) if not isinstance(terms, np.ndarray) else terms, dtype=complex)
    if b.size == 0:
        raise DomainError("transfer_check needs at least one term")
    im = b.imag
    if np.all(im < 0):
        sign = -1
    elif np.all(im > 0):
        sign = 1
    else:
        sign = 0
    c = float(np.min(np.abs(im) / np.abs(b)))
    return TransferReport(sign_ok=sign != 0, sign=sign, c_empirical=c, n_terms=int(b.size))


def large_rho_band(rho) -> tuple[float, float]:
    """``(pi/(3(rho^2+1)), pi/(3 rho^2))``."""
    rho = as_rho(rho)
    return math.pi / (3 * (rho * rho + 1)), math.pi / (3 * rho * rho)


def small_rho_band(rho) -> tuple[float, float]:
    """
    Band for ``I(rho) rho / log(1/rho)`` obtained purely from closed forms.

    Chain: ``|I - I_tilde| <= (11 sqrt 5 rho / c) I_tilde`` (perturbation
    control plus non-tangency with ``c = pi/sqrt(pi^2+1)``), then
    ``|I_tilde rho/(rho^2+1) - G| <= H``, then the ``G`` bracket and the
    ``H`` bound. Valid for certified pitches ``rho < 2 sqrt(5)/55``.
    """
    rho = as_rho(rho)
    L = math.log(1 / rho)
    lo, hi = g_bracket(rho)
    hb = h_bound(rho)
    pert = PERTURB_COEF * rho / NON_TANGENCY_C
    scale = (rho * rho + 1) / L
    return scale * (1 - pert) * (L + lo - hb), scale * (1 + pert) * (L + hi + hb)


@dataclass(frozen=True)
class AsymptoticReport:
    rho: float
    i_quad: float | None
    i_res: float | None
    i_tilde: float
    small_rho_ref: float
    large_rho_band: tuple[float, float]
    g_value: float
    g_bracket: tuple[float, float]
    ratio_small: float | None
    ratio_large: float | None
    series_tol: float | None = None

    def as_row(self) -> dict:
        return {
            "rho": self.rho, "i_quad": self.i_quad, "i_res": self.i_res, "i_tilde": self.i_tilde,
            "ref_small": self.small_rho_ref, "ref_large_lo": self.large_rho_band[0],
            "ref_large_hi": self.large_rho_band[1], "ratio_small": self.ratio_small,
            "ratio_large": self.ratio_large,
        }

    def to_dict(self) -> dict:
        return asdict(self)


def _report_one(rho: float, tol: float) -> AsymptoticReport:
    rho = as_rho(rho)
    i_quad = integrate_density(rho, tol).value if rho >= QUAD_RHO_MIN else None
    i_res, series_tol = None, None
    # the root series needs K ~ 1/(rho^2 tol) terms; relax tol by decades up to SERIES_TOL_MAX
    t = tol
    while i_res is None:
        try:
            i_res, series_tol = residue_sum(rho, t, relative=True).value, t
        except HelixMobiusError:
            if t >= SERIES_TOL_MAX:
                break
            t = min(10 * t, SERIES_TOL_MAX)
    i_tilde = approx_sum(rho, tol, relative=True).value
    L = math.log(1 / rho)
    ref_small = L / rho if rho < 1 else math.nan
    best = i_res if i_res is not None else i_quad
    ratio_small = best * rho / L if (best is not None and rho < 1) else None
    band = large_rho_band(rho)
    ref = i_quad if i_quad is not None else i_res
    ratio_large = ref * 3 * rho * rho / math.pi if ref is not None else None
    return AsymptoticReport(
        rho=rho, i_quad=i_quad, i_res=i_res, i_tilde=i_tilde, small_rho_ref=ref_small,
        large_rho_band=band, g_value=g_series(rho), g_bracket=g_bracket(rho),
        ratio_small=ratio_small, ratio_large=ratio_large, series_tol=series_tol)


def asymptotic_report(rho_grid: Sequence[float], tol: float = 1e-8,
                      threads: int | None = 1) -> list[AsymptoticReport]:
    """
    Compare the three methods with the small- and large-pitch references.

    ``tol`` is absolute for quadrature and relative for the two series.
    Quadrature is skipped below ``rho = 1e-3``, where its cost explodes.
    When the residue series cannot reach ``tol`` within its term cap, the
    relative tolerance is relaxed by factors of ten up to ``1e-4``; the
    value used is kept in ``series_tol``.
    Results keep the grid order regardless of ``threads``.
    """
    grid = [as_rho(r) for r in rho_grid]
    if not grid:
        raise DomainError("rho_grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("rho_grid must be increasing")
    if threads is None or threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(lambda r: _report_one(r, tol), grid))
    return [_report_one(r, tol) for r in grid]
