"""
``I(rho)`` as a sum of residues over the poles ``z_k``, and the closed-form
companion series over the approximants ``w_k``.

    I(rho)       = -4 pi (rho^2 + 1) sum_k Im 1/E'(z_k)
    I_tilde(rho) = -4 pi (rho^2 + 1) sum_k Im 1/E'(w_k)
                 = ((rho^2 + 1)/rho) sum_k Re 1/(k D_k)

with ``D_k = rho arcsinh(k pi rho)/(k pi) + sqrt((k pi rho)^2 + 1) - i rho``.

Truncation
----------
The ``w``-terms extend to a positive decreasing function ``f(t)`` of a
continuous index, so the omitted sum lies between ``int_{K+1}^inf f`` and
``int_K^inf f``. The tail is estimated by ``int_{K+1/2}^inf f`` and bounded
by ``int_K^{K+1} f``. For the ``z``-series the difference from the
``w``-terms is bounded termwise by the perturbation estimate
``|1/E'(z_k) - 1/E'(w_k)| <= eps_k/(1 - eps_k) |1/E'(w_k)|`` with
``eps_k = (11 sqrt 5 / 2) arcsinh(k pi rho)/(k pi)``, valid for certified
roots; that bound is summed by the same integral comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exceptions import DomainError, PoleError, ToleranceNotReached
from .kernel import as_rho, e_rho_prime
from .quadrature import EnergyEstimate
from .roots import CERT_RHO, StripRoot, refine_roots

__all__ = [
    "K_CAP",
    "SeriesTruncation",
    "approx_sum",
    "approx_terms",
    "d_k",
    "eta_bound",
    "residue_sum",
    "residue_term",
    "residue_terms",
    "series_cutoff",
]

K_CAP = 10**7
_K_START = 64
_CHUNK = 200_000
ETA_COEF = 11 * math.sqrt(5) / 2


@dataclass(frozen=True)
class SeriesTruncation:
    """Cutoff ``K`` and a bound on ``|sum_{k > K}|`` for the chosen series."""

    cutoff: int
    tail_bound: float
    tail_estimate: float = 0.0
    certified: bool = True


def d_k(rho, k):
    """``D_k(rho)``; vectorised over ``k`` (accepts real ``k`` for tail integrals)."""
    rho = as_rho(rho)
    kf = np.asarray(k, dtype=float)
    u = kf * np.pi * rho
    v = rho * np.arcsinh(u) / (kf * np.pi) + np.hypot(u, 1.0) - 1j * rho
    return complex(v) if np.ndim(k) == 0 else v


def approx_terms(rho, k):
    """``1/E'(w_k) = -i / (4 k pi rho D_k)`` from the closed form."""
    rho = as_rho(rho)
    kf = np.asarray(k, dtype=float)
    v = -1j / (4 * kf * np.pi * rho * d_k(rho, kf))
    return complex(v) if np.ndim(k) == 0 else v


def eta_bound(rho, k):
    """``(11 sqrt 5 / 2) arcsinh(k pi rho) / (k pi)``, which is at most ``(11 sqrt 5 / 2) rho``."""
    kf = np.asarray(k, dtype=float)
    return ETA_COEF * np.arcsinh(kf * np.pi * as_rho(rho)) / (kf * np.pi)


def residue_term(rho, root: StripRoot) -> complex:
    """``1/E'(z_k)``; the factor ``(rho^2 + 1)`` and the ``-4 pi`` are applied when summing."""
    return complex(residue_terms(rho, np.array([root.z]))[0])


def residue_terms(rho, z):
    d = np.asarray(e_rho_prime(rho, np.asarray(z, dtype=complex)))
    if np.any(np.abs(d) < 1e-300):
        raise PoleError("E' underflows at a refined root")
    return 1.0 / d


def _w_weight(rho, t):
    # -4 pi (rho^2 + 1) Im 1/E'(w(t)) = ((rho^2+1)/rho) Re D / (t |D|^2)
    dd = d_k(rho, t)
    return (rho * rho + 1) / rho * dd.real / (t * np.abs(dd) ** 2)


def _pert_weight(rho, t):
    # 4 pi (rho^2+1) eps/(1-eps) |1/E'(w)|, with |D| >= sqrt(u^2+1)
    eps = eta_bound(rho, t)
    u = t * np.pi * rho
    return (rho * rho + 1) / rho * eps / (1 - eps) / (t * np.hypot(u, 1.0))


def _integral(fn, a, b=np.inf):
    if math.isinf(b):
        # t = a/x maps [a, inf) onto (0, 1] with a bounded integrand
        g = lambda x: float(fn(a / x)) * a / (x * x) if x > 0 else 0.0  # noqa: E731
        val, _ = integrate.quad(g, 0.0, 1.0, limit=200, epsabs=0.0, epsrel=1e-11)
    else:
        val, _ = integrate.quad(lambda t: float(fn(t)), a, b, limit=200, epsabs=0.0, epsrel=1e-11)
    return val


def series_cutoff(rho, tol: float, use_roots: bool, k_cap: int = K_CAP) -> SeriesTruncation:
    """
    Smallest ``K`` (doubling from 64) whose tail bound is at most ``tol / 2``.

    For the root series the perturbation part is only a proven bound when
    ``rho < CERT_RHO``; above that the returned truncation is flagged
    uncertified.
    """
    rho = as_rho(rho)
    K = _K_START
    while True:
        width = _integral(lambda t: _w_weight(rho, t), K, K + 1)
        bound = width
        if use_roots:
            if eta_bound(rho, K) >= 0.5:
                bound = math.inf
            else:
                bound += _integral(lambda t: _pert_weight(rho, t), K)
        if bound <= tol / 2:
            break
        if K >= k_cap:
            raise ToleranceNotReached(
                f"series cutoff would exceed {k_cap} terms (tail bound {bound:.3g} > {tol / 2:.3g})")
        K = min(2 * K, k_cap)
    estimate = _integral(lambda t: _w_weight(rho, t), K + 0.5)
    certified = (not use_roots) or rho < CERT_RHO
    return SeriesTruncation(cutoff=K, tail_bound=bound, tail_estimate=estimate, certified=certified)


def _relative_scale(rho):
    # positive lower scale for I: half the first 64 terms of the w-series
    ks = np.arange(1, _K_START + 1, dtype=float)
    return 0.5 * math.fsum(_w_weight(rho, ks).tolist())


def approx_sum(rho, tol: float = 1e-9, relative: bool = False) -> EnergyEstimate:
    """
    Closed-form series ``I_tilde(rho)`` over the approximants ``w_k``.

    Parameters
    ----------
    tol : float
        Target bound on the truncation error; absolute unless ``relative``.
    """
    rho = as_rho(rho)
    if not tol > 0:
        raise DomainError("tol must be positive")
    tol_abs = tol * _relative_scale(rho) if relative else tol
    tr = series_cutoff(rho, tol_abs, use_roots=False)
    ks = np.arange(1, tr.cutoff + 1, dtype=float)
    terms = _w_weight(rho, ks)
    value = math.fsum(terms.tolist()) + tr.tail_estimate
    return EnergyEstimate(rho=rho, value=value, method="approx_series", tail_bound=tr.tail_bound,
                          tolerance=tol_abs, cutoff=tr.cutoff, certified=True)


def residue_sum(rho, tol: float = 1e-9, relative: bool = False,
                root_tol: float = 1e-13) -> EnergyEstimate:
    """
    Residue series over refined roots ``z_k``.

    Terms are summed in increasing ``k`` with ``math.fsum``. The omitted
    tail is estimated from the closed-form ``w``-series; the reported bound
    adds the summed perturbation estimate and is certified only for
    ``rho < 2 sqrt(5)/55``.

    Examples
    --------
    >>> est = residue_sum(0.05, 1e-6)
    >>> est.certified
    True
    """
    rho = as_rho(rho)
    if not tol > 0:
        raise DomainError("tol must be positive")
    tol_abs = tol * _relative_scale(rho) if relative else tol
    tr = series_cutoff(rho, tol_abs, use_roots=True)
    parts = []
    all_cert = True
    for start in range(1, tr.cutoff + 1, _CHUNK):
        ks = np.arange(start, min(start + _CHUNK, tr.cutoff + 1))
        _, z, _, _, cert, _ = refine_roots(rho, ks, root_tol)
        all_cert &= bool(np.all(cert))
        parts.append(-4 * np.pi * (rho * rho + 1) * residue_terms(rho, z).imag)
    terms = np.concatenate(parts)
    value = math.fsum(terms.tolist()) + tr.tail_estimate
    certified = tr.certified and all_cert
    return EnergyEstimate(rho=rho, value=value, method="residue_series", tail_bound=tr.tail_bound,
                          tolerance=tol_abs, cutoff=tr.cutoff, certified=certified)
