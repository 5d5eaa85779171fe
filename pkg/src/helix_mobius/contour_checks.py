"""
Contour integrals over the family ``Gamma_R`` used to justify the residue
expansion.

``Gamma_R`` is counter-clockwise: the real segment ``[-R, R]`` (piece 1),
the right side ``R + it``, ``0 <= t <= R`` (piece 2), the arc
``R sqrt(2) e^{i theta}``, ``pi/4 <= theta <= 3 pi/4`` (piece 3), and the
left side down from ``-R + iR`` to ``-R`` (piece 4). Only the pole-free
radii ``R_k = (2k + 1/2) pi`` are accepted.

The side and arc checks use the unregularised density ``1/E(z)`` (the
constant ``rho^2 + 1`` factored out) unless ``regularized=True``. The
closed-contour check uses the full density ``M`` on every piece.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DomainError
from .kernel import IMAG_GUARD, as_rho, e_rho, m_rho_complex, m_rho_real
from .quadrature import adaptive_gk
from .residue_series import residue_terms
from .roots import refine_roots

__all__ = [
    "ContourReport",
    "arc_integral",
    "closed_contour_check",
    "contour_radius",
    "regularizer_side_integral",
    "side_integral",
    "side_pieces",
]


def contour_radius(k: int) -> float:
    """``R_k = (2k + 1/2) pi``."""
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    return (2 * int(k) + 0.5) * math.pi


def _density(rho, regularized):
    if regularized:
        return lambda z: m_rho_complex(rho, z)
    return lambda z: 1.0 / np.asarray(e_rho(rho, z))


def _line(fn, lo, hi, tol, width=1.0):
    n = max(1, int(math.ceil((hi - lo) / width)))
    return adaptive_gk(fn, np.linspace(lo, hi, n + 1), tol).value


def side_pieces(rho, k: int, regularized: bool = False, tol: float = 1e-13) -> tuple[complex, complex]:
    """The two vertical line integrals ``(int_{Gamma_2}, int_{Gamma_4})`` at ``R_k``."""
    rho = as_rho(rho)
    R = contour_radius(k)
    f = _density(rho, regularized)
    right = _line(lambda t: 1j * f(R + 1j * t), 0.0, R, tol)
    left = _line(lambda t: -1j * f(-R + 1j * (R - t)), 0.0, R, tol)
    return right, left


def side_integral(rho, k: int, regularized: bool = False, tol: float = 1e-13) -> float:
    """``|int_{Gamma_2} + int_{Gamma_4}|`` at ``R_k``, from the two line integrals."""
    right, left = side_pieces(rho, k, regularized, tol)
    return abs(right + left)


def regularizer_side_integral(k: int) -> float:
    """Contribution of ``-1/z^2`` to the two sides, ``-1/R_k`` (from the antiderivative ``1/z``)."""
    return -1.0 / contour_radius(k)


def arc_integral(rho, k: int, regularized: bool = False, rel_tol: float = 1e-10) -> float:
    """
    ``|int_{Gamma_3}|`` at ``R_k``.

    On the arc ``|1/E(z)|`` is of order ``exp(-R sqrt(2) sin theta)``, so the
    tolerance is scaled by the endpoint size ``exp(-R)``.
    """
    rho = as_rho(rho)
    R = contour_radius(k)
    if R * math.sqrt(2) > IMAG_GUARD:
        from .exceptions import OverflowGuardError
        raise OverflowGuardError("the arc reaches past the imaginary-part guard")
    f = _density(rho, regularized)
    r = R * math.sqrt(2)
    scale = R * math.exp(-R) if not regularized else 1.0 / R
    val = _line(lambda th: f(r * np.exp(1j * th)) * 1j * r * np.exp(1j * th),
                math.pi / 4, 3 * math.pi / 4, rel_tol * scale, width=0.05)
    return abs(val)


@dataclass(frozen=True)
class ContourReport:
    rho: float
    k: int
    radius: float
    n_poles: int
    bottom: float
    sides: complex
    arc: complex
    contour_total: complex
    residue_total: float
    abs_diff: float
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("sides", "arc", "contour_total"):
            d[key] = [d[key].real, d[key].imag]
        return d


def closed_contour_check(rho, k: int, tol: float = 1e-7) -> ContourReport:
    """
    Compare the contour integral of ``M`` over ``Gamma_{R_k}`` with
    ``2 pi i`` times the enclosed residues.

    The enclosed poles are ``z_j`` and ``-conj(z_j)`` for ``j <= k``: every
    strip root has ``Re z_j <= 2 j pi < R_k`` and the next one starts at
    ``(2k + 1) pi > R_k``. The pair contributes
    ``-4 pi (rho^2 + 1) Im 1/E'(z_j)``.
    """
    rho = as_rho(rho)
    R = contour_radius(k)
    qtol = tol * 1e-3
    bottom = 2.0 * _line(lambda t: m_rho_real(rho, t), 0.0, R, qtol)
    right, left = side_pieces(rho, k, regularized=True, tol=qtol)
    r = R * math.sqrt(2)
    arc = _line(lambda th: m_rho_complex(rho, r * np.exp(1j * th)) * 1j * r * np.exp(1j * th),
                math.pi / 4, 3 * math.pi / 4, qtol, width=0.05)
    total = bottom + right + left + arc
    _, z, _, _, _, _ = refine_roots(rho, np.arange(1, k + 1))
    zmax = np.max(np.abs(z))
    if np.any(z.real >= R) or zmax >= r:
        raise DomainError("a strip root lies outside the contour; indexing assumption broken")
    residues = -4 * np.pi * (rho * rho + 1) * residue_terms(rho, z).imag
    rhs = math.fsum(residues.tolist())
    diff = abs(total - rhs)
    return ContourReport(rho=rho, k=int(k), radius=R, n_poles=2 * int(k), bottom=bottom,
                         sides=complex(right + left), arc=complex(arc), contour_total=complex(total),
                         residue_total=rhs, abs_diff=diff, tol=tol, passed=bool(diff <= tol))
