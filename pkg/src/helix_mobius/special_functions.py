"""
Scalar special functions and transcendental constants.

The function ``Sigma(u) = u sech u`` has a single positive critical point
``beta`` (``beta tanh beta = 1``) with maximum value ``alpha = Sigma(beta)``.
Its two monotone pieces have left inverses: the *outer* branch maps
``(0, alpha]`` onto ``[beta, inf)`` and the *inner* branch maps
``[-alpha, alpha]`` onto ``[-beta, beta]``.

The constants ``c_k`` are the roots of ``theta tan theta + 1 = 0`` in
``[(k - 1/2) pi, k pi]``.

All root solvers here are bisections on brackets known in closed form.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable

from .exceptions import DomainError

__all__ = [
    "AlphaBeta",
    "CkConstant",
    "SigmaBranch",
    "arcsinh_ratio_check",
    "bisect",
    "sech",
    "sigma_derivative",
    "sigma_inverse",
    "sigma_map",
    "solve_alpha_beta",
    "solve_ck",
]

# offset keeping the c_k bracket off the pole of tan at (k - 1/2) pi
CK_EPS = 1e-9
DEFAULT_TOL = 1e-12


def sech(u: float) -> float:
    """Overflow-free hyperbolic secant."""
    e = math.exp(-abs(u))
    return 2.0 * e / (1.0 + e * e)


def sigma_map(u: float) -> float:
    """Return ``u sech u``."""
    return u * sech(u)


def sigma_derivative(u: float) -> float:
    """Return ``(1 - u tanh u) sech u``, the derivative of :func:`sigma_map`."""
    return (1.0 - u * math.tanh(u)) * sech(u)


def bisect(f: Callable[[float], float], a: float, b: float, tol: float = DEFAULT_TOL,
           maxiter: int = 200) -> float:
    """
    Bisection for a sign change of ``f`` on ``[a, b]``.

    Stops when ``|f(mid)| <= tol`` or when the bracket has shrunk to a few
    ulps. The bracket must straddle a sign change; this is not checked
    beyond the endpoint signs.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise DomainError(f"no sign change on [{a!r}, {b!r}]: f(a)={fa!r}, f(b)={fb!r}")
    for _ in range(maxiter):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0 or abs(fm) <= tol * 1e-3:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
        if b - a <= 4.0 * math.ulp(max(abs(a), abs(b))):
            break
    return 0.5 * (a + b)


@dataclass(frozen=True)
class AlphaBeta:
    """Critical point ``beta`` of ``u sech u`` and its maximum value ``alpha``."""

    alpha: float
    beta: float

    def residuals(self) -> tuple[float, float, float]:
        """Residuals of ``beta tanh beta = 1``, ``beta sech beta = alpha`` and ``alpha sinh beta = 1``."""
        b = self.beta
        return (abs(b * math.tanh(b) - 1.0),
                abs(b * sech(b) - self.alpha),
                abs(math.sinh(b) * self.alpha - 1.0))


@functools.lru_cache(maxsize=None)
def _alpha_beta(tol: float) -> AlphaBeta:
    # 1 - tanh(1) > 0 and 1 - 2 tanh(2) < 0 bracket beta
    beta = bisect(lambda u: 1.0 - u * math.tanh(u), 1.0, 2.0, tol)
    return AlphaBeta(alpha=sigma_map(beta), beta=beta)


def solve_alpha_beta(tol: float = DEFAULT_TOL) -> AlphaBeta:
    """Solve ``beta tanh beta = 1`` on ``[1, 2]`` by bisection and set ``alpha = Sigma(beta)``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    return _alpha_beta(float(tol))


class SigmaBranch(str, enum.Enum):
    OUTER = "outer"
    INNER = "inner"


def sigma_inverse(v: float, branch: SigmaBranch | str = SigmaBranch.OUTER,
                  tol: float = DEFAULT_TOL) -> float:
    """
    Left inverse of ``Sigma(u) = u sech u`` on one of its monotone pieces.

    Parameters
    ----------
    v : float
        Target value. The outer branch accepts ``0 <= v <= alpha`` and
        returns ``+inf`` at ``v = 0``; the inner branch accepts
        ``|v| <= alpha``.
    branch : {"outer", "inner"}
        ``outer`` returns ``u >= beta``; ``inner`` returns ``|u| <= beta``.

    Raises
    ------
    DomainError
        If ``v`` lies outside the range of ``Sigma`` on the chosen branch.
    """
    branch = SigmaBranch(branch)
    ab = solve_alpha_beta()
    alpha, beta = ab.alpha, ab.beta
    if not math.isfinite(v):
        raise DomainError(f"sigma_inverse needs a finite argument, got {v!r}")
    # absorb rounding right at the branch point
    if abs(v) > alpha:
        if abs(v) - alpha <= 4 * math.ulp(alpha):
            v = math.copysign(alpha, v)
        else:
            raise DomainError(f"|v| = {abs(v)!r} exceeds alpha = {alpha!r}")

    if branch is SigmaBranch.INNER:
        if v == 0.0:
            return 0.0
        if abs(v) == alpha:
            return math.copysign(beta, v)
        return bisect(lambda u: sigma_map(u) - v, -beta, beta, tol)

    if v < 0:
        raise DomainError("the outer branch is restricted to [0, alpha]")
    if v == 0.0:
        return math.inf
    if v == alpha:
        return beta
    # Sigma(u) ~ 2u exp(-u) for large u
    hi = max(beta + 1.0, -2.0 * math.log(v / 2.0))
    while sigma_map(hi) > v:
        hi *= 2.0
    return bisect(lambda u: sigma_map(u) - v, beta, hi, tol)


@dataclass(frozen=True)
class CkConstant:
    """Root ``c_k`` of ``theta tan theta + 1 = 0`` in ``[(k - 1/2) pi, k pi]``."""

    k: int
    value: float

    @property
    def gap(self) -> float:
        """``k pi - c_k``; positive and strictly decreasing in ``k``."""
        return self.k * math.pi - self.value

    @property
    def residual(self) -> float:
        c = self.value
        return abs(c * math.tan(c) + 1.0)


@functools.lru_cache(maxsize=4096)
def _ck(k: int) -> float:
    # theta sin theta + cos theta has no pole inside the bracket
    f = lambda th: th * math.sin(th) + math.cos(th)  # noqa: E731
    return bisect(f, (k - 0.5) * math.pi + CK_EPS, k * math.pi, 0.0)


def solve_ck(k: int, tol: float = DEFAULT_TOL) -> CkConstant:
    """Return ``c_k`` for ``k >= 1``; values are cached per process."""
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    return CkConstant(k=int(k), value=_ck(int(k)))


def arcsinh_ratio_check(u: float) -> float:
    """Return ``arcsinh(u) / u``, which lies in ``(0, 1)`` for every ``u != 0``."""
    if u == 0:
        raise DomainError("arcsinh(u)/u is only evaluated off u = 0")
    return math.asinh(u) / u
