"""
Poles of the helix density in the upper half-plane.

The nonzero roots of ``E(z) = rho^2 z^2 + 4 sin^2(z/2)`` in the first
quadrant are one per strip ``[(2k - 1) pi, 2k pi] x (0, inf)``. Each root
``z_k`` sits near the closed-form point ``w_k = 2 pi k + 2i arcsinh(k pi rho)``
and, for small ``rho``, inside the disc of radius ``r_k = 2|E(w_k)|/|E'(w_k)|``
about it.

Two independent solvers are provided: damped Newton from ``w_k`` and a
bisection along the real-part curve of the rescaled equation
``sin(zeta) = (-1)^k i rho zeta``, ``zeta = z/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (IndeterminateCountError, NoSignChangeError,
                         NonConvergenceError, StripViolationError)
from .kernel import as_rho, e_rho, e_rho_prime
from .quadrature import adaptive_gk

__all__ = [
    "CERT_RHO",
    "StripRoot",
    "approx_root",
    "argument_principle",
    "count_zeros_rectangle",
    "curve_oracle",
    "curve_oracle_many",
    "e_at_w",
    "eprime_at_w",
    "error_bound",
    "refine_root",
    "refine_roots",
    "rouche_boundary_check",
    "rouche_radius",
]

#: pitch below which the Rouche disc about w_k is proven to hold z_k
CERT_RHO = 2 * math.sqrt(5) / 55
NEWTON_MAXITER = 100


@dataclass(frozen=True)
class StripRoot:
    """Approximant ``w``, refined root ``z`` and certification data for strip ``k``."""

    k: int
    w: complex
    z: complex
    rouche_radius: float
    error_bound: float
    certified: bool

    @property
    def abs_err(self) -> float:
        return abs(self.z - self.w)


def _ks(k):
    ks = np.asarray(k)
    if np.any(ks < 1) or np.any(ks != np.floor(ks)):
        from .exceptions import DomainError
        raise DomainError("strip indices must be positive integers")
    return ks.astype(float)


def approx_root(rho, k):
    """``w_k = 2 pi k + 2i arcsinh(k pi rho)``; vectorised over ``k``."""
    rho = as_rho(rho)
    kf = _ks(k)
    w = 2 * np.pi * kf + 2j * np.arcsinh(kf * np.pi * rho)
    return complex(w) if np.ndim(k) == 0 else w


def e_at_w(rho, k):
    """Closed form ``E(w_k) = 4 k pi rho^2 (-a^2/(k pi) + 2i a)``, ``a = arcsinh(k pi rho)``."""
    rho = as_rho(rho)
    kf = _ks(k)
    a = np.arcsinh(kf * np.pi * rho)
    v = 4 * kf * np.pi * rho**2 * (-a * a / (kf * np.pi) + 2j * a)
    return complex(v) if np.ndim(k) == 0 else v


def eprime_at_w(rho, k):
    """Closed form ``E'(w_k) = 4 k pi rho (rho + i(rho a/(k pi) + sqrt(u^2 + 1)))``, ``u = k pi rho``."""
    rho = as_rho(rho)
    kf = _ks(k)
    u = kf * np.pi * rho
    a = np.arcsinh(u)
    v = 4 * kf * np.pi * rho * (rho + 1j * (rho * a / (kf * np.pi) + np.hypot(u, 1.0)))
    return complex(v) if np.ndim(k) == 0 else v


def rouche_radius(rho, k):
    """``r_k = 2|E(w_k)| / |E'(w_k)|`` from the closed forms."""
    r = 2 * np.abs(e_at_w(rho, k)) / np.abs(eprime_at_w(rho, k))
    return float(r) if np.ndim(k) == 0 else r


def error_bound(rho, k):
    """``2 sqrt(5) rho arcsinh(k pi rho) / sqrt((k pi rho)^2 + 1)``."""
    rho = as_rho(rho)
    u = _ks(k) * np.pi * rho
    b = 2 * math.sqrt(5) * rho * np.arcsinh(u) / np.hypot(u, 1.0)
    return float(b) if np.ndim(k) == 0 else b


def _newton(rho, z, cap, tol, maxiter):
    """Damped, trust-capped Newton on a vector of starting points; returns (z, converged mask)."""
    z = np.array(z, dtype=complex)
    conv = np.zeros(z.shape, dtype=bool)
    eps = np.finfo(float).eps
    e = e_rho(rho, z)
    for _ in range(maxiter):
        act = ~conv
        if not np.any(act):
            break
        za, ea = z[act], e[act]
        step = ea / e_rho_prime(rho, za)
        done = np.abs(step) <= np.maximum(tol, 8 * eps * np.abs(za))
        mag = np.abs(step)
        with np.errstate(divide="ignore", over="ignore"):
            shrink = np.where(mag > cap[act], cap[act] / mag, 1.0)
        step = step * shrink
        znew = za - step
        enew = e_rho(rho, znew)
        # halve the step where |E| failed to decrease
        for _h in range(30):
            bad = (np.abs(enew) > np.abs(ea)) & ~done
            if not np.any(bad):
                break
            step = np.where(bad, 0.5 * step, step)
            znew = np.where(bad, za - step, znew)
            enew = np.where(bad, e_rho(rho, znew), enew)
        idx = np.flatnonzero(act)
        z[idx] = np.where(done, za, znew)
        e[idx] = np.where(done, ea, enew)
        conv[idx] = done
    return z, conv


def _in_strip(ks, z):
    return (z.real >= (2 * ks - 1) * np.pi) & (z.real <= 2 * ks * np.pi) & (z.imag > 0)


def _check_strip(ks, z):
    bad = ~_in_strip(ks, z)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise StripViolationError(f"root for k={int(ks[i])} left its strip: z={z[i]!r}")


def refine_roots(rho, ks, tol: float = 1e-12, maxiter: int = NEWTON_MAXITER,
                 fallback: bool = True):
    """
    Refine ``z_k`` for every ``k`` in ``ks`` at once.

    Returns ``(w, z, r, bound, certified, iterations_ok)`` arrays. Indices
    where Newton fails to converge are re-solved with the curve oracle and
    polished; with ``fallback=False`` they raise ``NonConvergenceError``.
    """
    rho = as_rho(rho)
    kf = _ks(np.atleast_1d(ks))
    w = approx_root(rho, kf)
    r = rouche_radius(rho, kf)
    bound = error_bound(rho, kf)
    z, conv = _newton(rho, w, np.maximum(r, 1e-300), tol, maxiter)
    # far from the small-pitch regime Newton may settle on another root
    conv &= _in_strip(kf, z)
    if not np.all(conv):
        if not fallback:
            raise NonConvergenceError(
                f"Newton did not converge within {maxiter} iterations for k={kf[~conv].astype(int).tolist()}")
        seed = curve_oracle_many(rho, kf[~conv])
        zp, cp = _newton(rho, seed, np.full(seed.shape, np.inf), tol, maxiter)
        if not np.all(cp):
            raise NonConvergenceError("Newton polish after the curve oracle did not converge")
        z[~conv] = zp
    _check_strip(kf, z)
    certified = (rho < CERT_RHO) & (np.abs(z - w) <= bound)
    return w, z, r, bound, certified, conv


def refine_root(rho, k: int, tol: float = 1e-12) -> StripRoot:
    """
    Newton refinement of ``z_k`` from ``w_k``.

    Examples
    --------
    >>> root = refine_root(0.05, 1)
    >>> root.certified and abs(root.z - root.w) <= root.error_bound
    True
    """
    w, z, r, b, c, _ = refine_roots(rho, [k], tol, fallback=False)
    return StripRoot(k=int(k), w=complex(w[0]), z=complex(z[0]), rouche_radius=float(r[0]),
                     error_bound=float(b[0]), certified=bool(c[0]))


# -- curve-intersection oracle ---------------------------------------------

def _phi(rho, s, x):
    # residual of the cosh-curve after substituting y = arcsinh(s rho x sec x)
    v = s * rho * x / np.cos(x)
    return s * rho * np.arcsinh(v) + np.sin(x) * np.hypot(1.0, v), v


def curve_oracle_many(rho, ks, iters: int = 200):
    """Vectorised :func:`curve_oracle` (bisection run to machine precision)."""
    rho = as_rho(rho)
    kf = _ks(np.atleast_1d(ks))
    s = np.where(kf % 2 == 0, 1.0, -1.0)
    a = (kf - 0.5) * np.pi
    b = kf * np.pi
    a = a + 1e-9 * np.maximum(1.0, a)
    fa, _ = _phi(rho, s, a)
    fb, _ = _phi(rho, s, b)
    if np.any(np.sign(fa) == np.sign(fb)):
        raise NoSignChangeError("curve residual does not change sign on the strip bracket")
    sa = np.sign(fa)
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm, _ = _phi(rho, s, m)
        left = np.sign(fm) == sa
        a = np.where(left, m, a)
        b = np.where(left, b, m)
        if np.all(b - a <= 2 * np.spacing(b)):
            break
    x = 0.5 * (a + b)
    _, v = _phi(rho, s, x)
    return 2.0 * (x + 1j * np.arcsinh(v))


def curve_oracle(rho, k: int, tol: float = 1e-12) -> complex:
    """
    Root ``z_k`` from the intersection of the two real solution curves.

    With ``zeta = x + iy = z/2`` and ``s = (-1)^k`` the root satisfies
    ``cos x sinh y = s rho x`` and ``sin x cosh y = -s rho y``. The first
    gives ``y = arcsinh(s rho x sec x)``; substituting into the second
    leaves a real function of ``x`` that changes sign exactly once on
    ``((k - 1/2) pi, k pi]`` and is bisected there.
    """
    del tol  # bisection is run to the bracket's ulp limit
    return complex(curve_oracle_many(rho, [k])[0])


# -- Rouche and argument-principle checks ----------------------------------

def rouche_boundary_check(rho, k: int, n: int = 64) -> tuple[bool, float]:
    """
    Test ``|E(z) - L(z)| < |L(z)|`` on ``n`` points of ``|z - w_k| = r_k``,
    ``L(z) = E'(w_k)(z - w_k)``. Returns ``(holds, max ratio)``.
    """
    w = approx_root(rho, k)
    r = rouche_radius(rho, k)
    dp = eprime_at_w(rho, k)
    th = 2 * np.pi * np.arange(n) / n
    z = w + r * np.exp(1j * th)
    L = dp * (z - w)
    ratio = np.abs(e_rho(rho, z) - L) / np.abs(L)
    return bool(np.all(ratio < 1.0)), float(np.max(ratio))


def argument_principle(rho, x0: float, x1: float, y0: float, y1: float,
                       tol: float = 1e-9) -> complex:
    """``(1 / 2 pi i)`` times the integral of ``E'/E`` around the rectangle, counter-clockwise."""
    rho = as_rho(rho)

    def dlog(z):
        return e_rho_prime(rho, z) / e_rho(rho, z)

    # guard: the boundary must stay clear of zeros of E
    nx = np.linspace(x0, x1, 513)
    ny = np.linspace(y0, y1, 513)
    pts = np.concatenate([nx + 1j * y0, x1 + 1j * ny, nx + 1j * y1, x0 + 1j * ny])
    scale = rho**2 * np.abs(pts) ** 2 + np.abs(2 * np.sin(0.5 * pts)) ** 2
    if np.any(np.abs(e_rho(rho, pts)) < 1e-10 * scale):
        raise IndeterminateCountError("contour passes too close to a zero of E; perturb the height")

    def side(fn, lo, hi):
        n = max(1, int(math.ceil((hi - lo) / 0.5)))
        return adaptive_gk(fn, np.linspace(lo, hi, n + 1), tol).value

    bottom = side(lambda x: dlog(x + 1j * y0), x0, x1)
    right = side(lambda y: 1j * dlog(x1 + 1j * y), y0, y1)
    top = -side(lambda x: dlog(x + 1j * y1), x0, x1)
    left = -side(lambda y: 1j * dlog(x0 + 1j * y), y0, y1)
    return (bottom + right + top + left) / (2j * np.pi)


def count_zeros_rectangle(rho, k: int, height: float | None = None, delta: float = 1e-6,
                          complementary: bool = False) -> int:
    """
    Number of zeros of ``E`` in ``[(2k-1) pi, 2k pi] x [delta, height]``.

    With ``complementary=True`` the rectangle is the neighbouring strip
    ``[(2k-2) pi + delta, (2k-1) pi - delta]``, which holds no zeros.

    Raises
    ------
    IndeterminateCountError
        If the winding integral is not within 0.25 of an integer or the
        contour passes too close to a zero.
    """
    rho = as_rho(rho)
    if height is None:
        height = 2 * math.asinh(k * math.pi * rho) + 2
    if complementary:
        x0, x1 = (2 * k - 2) * math.pi + delta, (2 * k - 1) * math.pi - delta
    else:
        x0, x1 = (2 * k - 1) * math.pi, 2 * k * math.pi
    raw = argument_principle(rho, x0, x1, delta, height)
    n = int(round(raw.real))
    if abs(raw - n) >= 0.25:
        raise IndeterminateCountError(f"winding integral {raw!r} is not near an integer")
    return n
