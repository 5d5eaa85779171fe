"""
The helix energy density and the exponential polynomial behind its poles.

For pitch ``rho > 0`` the rescaled density is

    M(t) = (rho^2 + 1) / (rho^2 t^2 + 4 sin^2(t/2)) - 1/t^2

and its nonzero poles are the nonzero roots of
``E(z) = rho^2 z^2 + 4 sin^2(z/2)``. All functions accept scalars or numpy
arrays; complex points are plain Python/numpy complex numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, OverflowGuardError, PoleError

__all__ = [
    "IMAG_GUARD",
    "SERIES_CROSSOVER",
    "Pitch",
    "as_rho",
    "e_rho",
    "e_rho_derivatives",
    "e_rho_double_prime",
    "e_rho_factors",
    "e_rho_prime",
    "four_sin2_half",
    "m_rho_complex",
    "m_rho_real",
    "m_rho_sinc_form",
]

SERIES_CROSSOVER = 1e-2
IMAG_GUARD = 700.0


@dataclass(frozen=True)
class Pitch:
    """Helix pitch parameter; the helix is ``t -> (cos t, sin t, rho t)``."""

    rho: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise DomainError(f"rho must be positive and finite, got {self.rho!r}")

    def __float__(self):
        return float(self.rho)


def as_rho(rho) -> float:
    """Validate a pitch given as a float or :class:`Pitch`."""
    return float(Pitch(float(rho)))


def _series_tail(rho2p1, x2):
    # (M(t)) near 0 from 2 - 2cos t = t^2 - t^4/12 + t^6/360 - t^8/20160
    q = (1.0 / 12.0 - x2 / 360.0 + x2 * x2 / 20160.0) / rho2p1
    x = q * x2
    return q * (1.0 + x * (1.0 + x * (1.0 + x)))


def m_rho_real(rho, t):
    """
    Density ``M(t)`` on the real line, nonnegative and even in ``t``.

    A Taylor branch is used for ``|t| < 1e-2``, where the closed form
    loses about eight digits to cancellation; ``M(0) = 1/(12(rho^2+1))``.
    """
    rho = as_rho(rho)
    t_arr = np.abs(np.asarray(t, dtype=float))
    c = rho * rho + 1.0
    small = t_arr < SERIES_CROSSOVER
    out = np.empty_like(t_arr)
    if np.any(small):
        ts = t_arr[small]
        out[small] = _series_tail(c, ts * ts)
    big = ~small
    if np.any(big):
        tb = t_arr[big]
        s = 2.0 * np.sin(0.5 * tb)
        t2 = tb * tb
        # (t^2 - 4 sin^2(t/2)) / (t^2 D) avoids subtracting two O(1/t^2) terms
        num = (tb - s) * (tb + s)
        out[big] = num / (t2 * (rho * rho * t2 + s * s))
    out = np.maximum(out, 0.0)
    if np.ndim(t) == 0:
        return float(out)
    return out


def m_rho_sinc_form(rho, t):
    """``(1 - sinc^2(t/2)) / (t^2 (sinc^2(t/2) + rho^2))`` ; independent check of :func:`m_rho_real`."""
    rho = as_rho(rho)
    t = np.asarray(t, dtype=float)
    s = np.sinc(t / (2 * np.pi))  # numpy sinc is sin(pi x)/(pi x)
    small = np.abs(t) < 1e-4
    ts = np.where(small, 1.0, t)
    # 1 - sinc^2(t/2) = t^2/12 + O(t^4), so the t = 0 limit is 1/(12 (rho^2 + 1))
    num = np.where(small, 1.0 / 12.0 - t * t / 360.0, (1.0 - s * s) / (ts * ts))
    out = num / (s * s + rho * rho)
    return float(out) if out.ndim == 0 else out


def _guard(z):
    if np.any(np.abs(np.imag(z)) > IMAG_GUARD):
        raise OverflowGuardError(f"|Im z| exceeds the overflow guard {IMAG_GUARD}")


def four_sin2_half(z):
    """``4 sin^2(z/2)`` by half-angle for ``|Im z| < 1`` and as ``2 - 2 cos z`` otherwise."""
    z = np.asarray(z, dtype=complex)
    near = np.abs(z.imag) < 1.0
    s = 2.0 * np.sin(0.5 * z)
    out = np.where(near, s * s, 2.0 - 2.0 * np.cos(z))
    return out


def _ret(x, like):
    return complex(x) if np.ndim(like) == 0 else x


def e_rho(rho, z):
    """``E(z) = rho^2 z^2 + 4 sin^2(z/2)``."""
    rho = as_rho(rho)
    _guard(z)
    zz = np.asarray(z, dtype=complex)
    return _ret(rho * rho * zz * zz + four_sin2_half(zz), z)


def e_rho_prime(rho, z):
    """``E'(z) = 2 rho^2 z + 2 sin z``."""
    rho = as_rho(rho)
    _guard(z)
    zz = np.asarray(z, dtype=complex)
    return _ret(2.0 * rho * rho * zz + 2.0 * np.sin(zz), z)


def e_rho_double_prime(rho, z):
    """``E''(z) = 2 rho^2 + 2 cos z``."""
    rho = as_rho(rho)
    _guard(z)
    zz = np.asarray(z, dtype=complex)
    return _ret(2.0 * rho * rho + 2.0 * np.cos(zz), z)


def e_rho_derivatives(rho, z):
    """Return ``(E, E', E'')`` at ``z``."""
    return e_rho(rho, z), e_rho_prime(rho, z), e_rho_double_prime(rho, z)


def e_rho_factors(rho, z):
    """The irreducible factors ``(2 sin(z/2) + i rho z, 2 sin(z/2) - i rho z)`` of ``E``."""
    rho = as_rho(rho)
    _guard(z)
    zz = np.asarray(z, dtype=complex)
    s = 2.0 * np.sin(0.5 * zz)
    return _ret(s + 1j * rho * zz, z), _ret(s - 1j * rho * zz, z)


def m_rho_complex(rho, z):
    """
    Meromorphic extension of ``M`` to the complex plane.

    The origin is a removable singularity and is handled by the same
    series as :func:`m_rho_real`. Away from it the sum-of-squares form is
    used unless it has lost most of its digits, in which case the factored
    form takes over.

    Raises
    ------
    PoleError
        If ``z`` is a pole to working precision.
    """
    rho = as_rho(rho)
    _guard(z)
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    c = rho * rho + 1.0
    out = np.empty_like(zz)
    small = np.abs(zz) < SERIES_CROSSOVER
    if np.any(small):
        zs = zz[small]
        out[small] = _series_tail(c, zs * zs)
    big = ~small
    if np.any(big):
        zb = zz[big]
        s = 2.0 * np.sin(0.5 * zb)
        a = rho * zb
        denom = a * a + s * s
        scale = np.abs(a) ** 2 + np.abs(s) ** 2
        fp = s + 1j * a
        fm = s - 1j * a
        ill = np.abs(denom) < 1e-8 * scale
        denom = np.where(ill, fp * fm, denom)
        if np.any(np.abs(denom) <= 8 * np.finfo(float).eps * scale):
            raise PoleError("z is a pole of M to working precision")
        out[big] = c / denom - 1.0 / (zb * zb)
    if np.ndim(z) == 0:
        return complex(out[0])
    return out.reshape(np.shape(z))
