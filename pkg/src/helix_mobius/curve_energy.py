"""
O'Hara energies of space curves.

For a curve ``gamma`` and exponents ``j, p >= 1`` the pointwise energy is

    E^{j,p}(gamma, s) = int (|gamma(t) - gamma(s)|^{-j} - D(t, s)^{-j})^p |gamma'(t)| dt,

with ``D`` the intrinsic (arclength) distance, the shorter arc on closed
curves. The integrand is continuous across ``t = s`` for ``C^2`` curves but
the two reciprocals cancel catastrophically there, so a short window
around the diagonal is integrated from a local model built from the
curvature at ``s``.

Curves are either analytic (callables for position and derivatives) or
sampled (cubic splines through points, optionally with tangents).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .exceptions import CostGuardError, DegeneracyError, DomainError, ToleranceNotReached
from .kernel import as_rho, m_rho_real
from .quadrature import MAX_PANELS, adaptive_gk

__all__ = [
    "AnalyticCurve",
    "Curve",
    "EnergyDensityValue",
    "SampledCurve",
    "circle_curve",
    "ellipse_curve",
    "gradient_integrand",
    "helix_curve",
    "mobius_gradient_field",
    "pointwise_energy",
    "read_curve_csv",
    "segment_curve",
    "total_energy",
    "truncated_helix_energy",
    "truncated_helix_bound",
    "write_curve_csv",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)
DEGENERACY_RATIO = 1e-10
# a stalled quadrature after chords this short is reported as a near self-intersection
NEAR_COLLISION_RATIO = 1e-6


class Curve:
    """
    Base class: subclasses provide ``position`` and ``velocity`` for arrays
    of parameters, returning arrays of shape ``(n, 3)``.
    """

    n_cells = 1024

    def __init__(self, domain: tuple[float, float], closed: bool = False):
        a, b = float(domain[0]), float(domain[1])
        if not b > a:
            raise DomainError("curve domain must be a nonempty interval")
        self.domain = (a, b)
        self.closed = bool(closed)
        self._table = None

    @property
    def period(self) -> float:
        return self.domain[1] - self.domain[0]

    def position(self, t):
        raise NotImplementedError

    def velocity(self, t):
        raise NotImplementedError

    def acceleration(self, t):
        """Central difference of the velocity."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        h = 1e-5 * max(1.0, self.period / (2 * np.pi))
        return (self.velocity(t + h) - self.velocity(t - h)) / (2 * h)

    def speed(self, t):
        return np.linalg.norm(self.velocity(np.atleast_1d(t)), axis=-1)

    def curvature(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        v = self.velocity(t)
        a = self.acceleration(t)
        sp = np.linalg.norm(v, axis=-1)
        return np.linalg.norm(np.cross(v, a), axis=-1) / sp**3

    # -- arclength ---------------------------------------------------------
    def _gl(self, lo, hi):
        half = 0.5 * (hi - lo)
        x = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_X[None, :]
        sp = self.speed(x.ravel()).reshape(x.shape)
        return half * (sp @ _GL_W)

    def _arc_table(self):
        if self._table is None:
            a, b = self.domain
            edges = np.linspace(a, b, self.n_cells + 1)
            cells = self._gl(edges[:-1], edges[1:])
            cum = np.concatenate([[0.0], np.cumsum(cells)])
            self._table = (edges, cum)
        return self._table

    @property
    def length(self) -> float:
        return float(self._arc_table()[1][-1])

    def arclength(self, t):
        """Signed arclength from the start of the domain (periodically extended when closed)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        edges, cum = self._arc_table()
        a = self.domain[0]
        if self.closed:
            wraps = np.floor((t - a) / self.period)
            tt = t - wraps * self.period
        else:
            wraps = np.zeros_like(t)
            tt = t
        idx = np.clip(np.searchsorted(edges, tt, side="right") - 1, 0, len(edges) - 2)
        base = edges[idx]
        part = self._gl(base, tt)
        return cum[idx] + part + wraps * cum[-1]

    def intrinsic_distance(self, t, s):
        d = np.abs(self.arclength(t) - self.arclength(s))
        if self.closed:
            d = np.minimum(d, self.length - d)
        return d


class AnalyticCurve(Curve):
    """Curve given by vectorised callables; ``arclength`` may be supplied in closed form."""

    def __init__(self, position: Callable, velocity: Callable, domain, closed=False,
                 acceleration: Callable | None = None, arclength: Callable | None = None):
        super().__init__(domain, closed)
        self._pos, self._vel, self._acc, self._arc = position, velocity, acceleration, arclength

    def position(self, t):
        return self._pos(np.atleast_1d(np.asarray(t, dtype=float)))

    def velocity(self, t):
        return self._vel(np.atleast_1d(np.asarray(t, dtype=float)))

    def acceleration(self, t):
        if self._acc is None:
            return super().acceleration(t)
        return self._acc(np.atleast_1d(np.asarray(t, dtype=float)))

    def arclength(self, t):
        if self._arc is None:
            return super().arclength(t)
        return self._arc(np.atleast_1d(np.asarray(t, dtype=float)))

    @property
    def length(self) -> float:
        if self._arc is None:
            return super().length
        a, b = self.domain
        return float(self._arc(np.array([b]))[0] - self._arc(np.array([a]))[0])


def helix_curve(rho, half_length: float) -> AnalyticCurve:
    """``t -> (cos t, sin t, rho t)`` on ``[-half_length, half_length]``."""
    rho = as_rho(rho)
    v = math.hypot(1.0, rho)
    return AnalyticCurve(
        position=lambda t: np.stack([np.cos(t), np.sin(t), rho * t], axis=-1),
        velocity=lambda t: np.stack([-np.sin(t), np.cos(t), np.full_like(t, rho)], axis=-1),
        acceleration=lambda t: np.stack([-np.cos(t), -np.sin(t), np.zeros_like(t)], axis=-1),
        arclength=lambda t: v * t,
        domain=(-half_length, half_length))


def circle_curve(radius: float = 1.0) -> AnalyticCurve:
    r = float(radius)
    return AnalyticCurve(
        position=lambda t: r * np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=-1),
        velocity=lambda t: r * np.stack([-np.sin(t), np.cos(t), np.zeros_like(t)], axis=-1),
        acceleration=lambda t: r * np.stack([-np.cos(t), -np.sin(t), np.zeros_like(t)], axis=-1),
        arclength=lambda t: r * t,
        domain=(0.0, 2 * np.pi), closed=True)


def ellipse_curve(a: float, b: float) -> AnalyticCurve:
    return AnalyticCurve(
        position=lambda t: np.stack([a * np.cos(t), b * np.sin(t), np.zeros_like(t)], axis=-1),
        velocity=lambda t: np.stack([-a * np.sin(t), b * np.cos(t), np.zeros_like(t)], axis=-1),
        acceleration=lambda t: np.stack([-a * np.cos(t), -b * np.sin(t), np.zeros_like(t)], axis=-1),
        domain=(0.0, 2 * np.pi), closed=True)


def segment_curve(length: float = 1.0) -> AnalyticCurve:
    z = lambda t: np.zeros_like(t)  # noqa: E731
    return AnalyticCurve(
        position=lambda t: np.stack([t, z(t), z(t)], axis=-1),
        velocity=lambda t: np.stack([np.ones_like(t), z(t), z(t)], axis=-1),
        acceleration=lambda t: np.stack([z(t), z(t), z(t)], axis=-1),
        arclength=lambda t: t, domain=(0.0, length))


class SampledCurve(Curve):
    """
    Cubic-spline curve through samples.

    Closed curves are made periodic: when the last point does not repeat
    the first, the first point is appended one (last) parameter step later.
    With ``tangents`` a Hermite spline is used instead.
    """

    def __init__(self, points, params=None, tangents=None, closed: bool = False):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise DomainError("points must have shape (n, 3)")
        n = len(pts)
        if n < 8:
            raise DomainError("a sampled curve needs at least 8 points")
        t = np.arange(n, dtype=float) if params is None else np.asarray(params, dtype=float)
        if t.shape != (n,) or np.any(np.diff(t) <= 0):
            raise DomainError("parameter values must be strictly increasing, one per point")
        tan = None if tangents is None else np.asarray(tangents, dtype=float)
        if tan is not None:
            if tan.shape != pts.shape:
                raise DomainError("tangents must match the points' shape")
            if np.any(np.linalg.norm(tan, axis=1) == 0):
                raise DomainError("tangents must be nonzero")
        if closed:
            scale = max(1.0, float(np.max(np.abs(pts))))
            if np.linalg.norm(pts[-1] - pts[0]) > 1e-12 * scale:
                t = np.append(t, t[-1] + (t[-1] - t[-2]))
                pts = np.vstack([pts, pts[:1]])
                if tan is not None:
                    tan = np.vstack([tan, tan[:1]])
            else:
                pts = pts.copy()
                pts[-1] = pts[0]
        super().__init__((t[0], t[-1]), closed)
        if tan is not None:
            self._spline = CubicHermiteSpline(t, pts, tan, axis=0)
        else:
            self._spline = CubicSpline(t, pts, axis=0, bc_type="periodic" if closed else "not-a-knot")
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        self.params = t
        self.n_cells = 4 * (len(t) - 1)

    def _wrap(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.closed:
            a = self.domain[0]
            t = a + np.mod(t - a, self.period)
        return t

    def position(self, t):
        return self._spline(self._wrap(t))

    def velocity(self, t):
        return self._d1(self._wrap(t))

    def acceleration(self, t):
        return self._d2(self._wrap(t))


# -- CSV input / output -----------------------------------------------------

def read_curve_csv(path) -> SampledCurve:
    """
    Read ``t,x,y,z`` (optionally ``tx,ty,tz``) rows; a line ``# closed=true``
    marks a closed curve.
    """
    closed = False
    rows = []
    with open(path, newline="") as fh:
        lines = []
        for line in fh:
            s = line.strip()
            if s.startswith("#"):
                key, _, val = s[1:].partition("=")
                if key.strip().lower() == "closed":
                    closed = val.strip().lower() in ("true", "1", "yes")
                continue
            if s:
                lines.append(s)
    reader = csv.DictReader(lines)
    need = {"t", "x", "y", "z"}
    if reader.fieldnames is None or not need <= set(reader.fieldnames):
        raise DomainError("curve CSV needs a header with columns t,x,y,z")
    has_tan = {"tx", "ty", "tz"} <= set(reader.fieldnames)
    for r in reader:
        rows.append([float(r[c]) for c in (["t", "x", "y", "z"] + (["tx", "ty", "tz"] if has_tan else []))])
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2 or len(arr) == 0:
        raise DomainError("curve CSV has no data rows")
    tangents = arr[:, 4:7] if has_tan else None
    return SampledCurve(arr[:, 1:4], params=arr[:, 0], tangents=tangents, closed=closed)


def write_curve_csv(path, params, points, closed: bool = False, tangents=None) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        if closed:
            fh.write("# closed=true\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "y", "z"] + (["tx", "ty", "tz"] if tangents is not None else []))
        for i, (t, p) in enumerate(zip(params, points)):
            row = [t, *p] + (list(tangents[i]) if tangents is not None else [])
            w.writerow(["%.17g" % v for v in row])


# -- pointwise and total energy -------------------------------------------

@dataclass(frozen=True)
class EnergyDensityValue:
    s: float
    value: float
    j: float
    p: float
    error_estimate: float = 0.0


def _window(curve: Curve, s: float) -> float:
    k = float(curve.curvature(s)[0])
    v = float(curve.speed(s)[0])
    ell = 1e-2 * min(1.0, 1.0 / k) if k > 0 else 1e-2
    return ell / v


def _energy_integrand(curve: Curve, s: float, j: float, p: float, flags: dict):
    ps = curve.position(s)[0]
    arc_s = curve.arclength(s)[0]

    def f(t):
        d = curve.position(t) - ps
        chord = np.linalg.norm(d, axis=-1)
        arc = np.abs(curve.arclength(t) - arc_s)
        if curve.closed:
            arc = np.minimum(arc, curve.length - arc)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.min(np.where(arc > 0, chord / arc, 1.0), initial=1.0)
        flags["min_ratio"] = min(flags.get("min_ratio", 1.0), float(r))
        if np.any(chord <= DEGENERACY_RATIO * arc):
            flags["degenerate"] = True
            chord = np.maximum(chord, DEGENERACY_RATIO * arc)
        diff = np.maximum(chord ** (-j) - arc ** (-j), 0.0)
        return diff**p * curve.speed(t)

    return f


def _outer_edges(lo, hi, width):
    n = max(4, int(math.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, n + 1)


def pointwise_energy(curve: Curve, s: float, j: float = 2.0, p: float = 1.0, tol: float = 1e-9,
                     panel_width: float | None = None,
                     max_panels: int = MAX_PANELS) -> EnergyDensityValue:
    """
    ``E^{j,p}(curve, s)``.

    Outside a window ``|t - s| < delta`` the integral is adaptive
    Gauss-Kronrod; inside it, for ``j = 2`` Simpson's rule is applied on each
    half with the diagonal value ``(kappa^2/12)^p |gamma'(s)|``, and for
    other ``j`` the local power law ``(j kappa^2 / 24)^p L^{p(2-j)}`` is
    integrated exactly.

    Raises
    ------
    DegeneracyError
        If the chord nearly vanishes away from the diagonal.
    """
    if j < 1 or p < 1:
        raise DomainError("exponents must satisfy j >= 1 and p >= 1")
    if p * (2 - j) <= -1:
        raise DomainError(f"E^({j},{p}) diverges at the diagonal")
    s = float(s)
    a, b = curve.domain
    if curve.closed:
        lo, hi = s - 0.5 * curve.period, s + 0.5 * curve.period
    else:
        if not a <= s <= b:
            raise DomainError("s must lie in the curve's domain")
        lo, hi = a, b
    delta = _window(curve, s)
    width = panel_width if panel_width is not None else (hi - lo) / 64
    flags: dict = {}
    f = _energy_integrand(curve, s, j, p, flags)
    kappa = float(curve.curvature(s)[0])
    v = float(curve.speed(s)[0])

    total, err = 0.0, 0.0
    pieces = []
    if s - delta > lo:
        pieces.append((lo, s - delta))
    if s + delta < hi:
        pieces.append((s + delta, hi))
    for x0, x1 in pieces:
        try:
            q = adaptive_gk(f, _outer_edges(x0, x1, width), tol / 4, max_panels)
        except ToleranceNotReached as exc:
            if flags.get("min_ratio", 1.0) < NEAR_COLLISION_RATIO:
                raise DegeneracyError(
                    f"chord/arc ratio fell to {flags['min_ratio']:.2e}; the curve nearly meets itself") from exc
            raise
        total += q.value
        err += q.error

    left = min(delta, s - lo)
    right = min(delta, hi - s)
    if j == 2:
        f0 = (kappa * kappa / 12.0) ** p * v
        for sgn, w in ((-1, left), (1, right)):
            if w > 0:
                fm, fe = f(np.array([s + sgn * 0.5 * w, s + sgn * w]))
                total += w / 6.0 * (f0 + 4 * fm + fe)
    else:
        q_exp = p * (2 - j)
        amp = (j * kappa * kappa / 24.0) ** p
        for w in (left, right):
            total += amp * v ** (q_exp + 1) * w ** (q_exp + 1) / (q_exp + 1)
    if flags.get("degenerate"):
        raise DegeneracyError("chord length collapses away from the diagonal (self-intersection?)")
    return EnergyDensityValue(s=s, value=float(max(total, 0.0)), j=float(j), p=float(p),
                              error_estimate=float(err))


def total_energy(curve: Curve, j: float = 2.0, p: float = 1.0, tol: float = 1e-8,
                 n_outer: int = 64) -> float:
    """
    ``int E^{j,p}(curve, s) |gamma'(s)| ds``: periodic trapezoid rule for
    closed curves, Gauss-Legendre with ``n_outer`` nodes for open ones.
    """
    a, b = curve.domain
    if curve.closed:
        s = a + curve.period * np.arange(n_outer) / n_outer
        w = np.full(n_outer, curve.period / n_outer)
    else:
        x, wx = np.polynomial.legendre.leggauss(n_outer)
        s = 0.5 * (b - a) * x + 0.5 * (b + a)
        w = 0.5 * (b - a) * wx
    vals = np.array([pointwise_energy(curve, si, j, p, tol).value for si in s])
    return math.fsum((vals * curve.speed(s) * w).tolist())


# -- truncated helix ---------------------------------------------------------

def truncated_helix_bound(rho, half_height: float) -> float:
    """``2 N (pi/3) sqrt(1 + rho^2) / rho^3``."""
    rho = as_rho(rho)
    return 2 * half_height * (math.pi / 3) * math.sqrt(1 + rho * rho) / rho**3


def truncated_helix_energy(rho, half_height: float, tol: float = 1e-10,
                           max_panels: int = MAX_PANELS) -> float:
    """
    Moebius energy of the helix inside the cylinder ``|z| <= N``.

    With ``L = N / rho`` the double integral over ``t, s in [-L, L]`` of
    ``M(t - s)`` depends only on ``h = t - s``, giving
    ``2 int_0^{2L} (2L - h) M(h) dh``.
    """
    rho = as_rho(rho)
    if not half_height > 0:
        raise DomainError("half_height must be positive")
    L = half_height / rho
    n = int(math.ceil(2 * L / math.pi))
    if n > max_panels:
        raise CostGuardError(f"{n} panels exceed the budget of {max_panels}")
    edges = np.linspace(0.0, 2 * L, max(n, 1) + 1)
    q = adaptive_gk(lambda h: (2 * L - h) * m_rho_real(rho, h), edges, tol / 2, max_panels)
    return 2.0 * q.value


# -- gradient ----------------------------------------------------------------

def gradient_integrand(curve: Curve, t: float, s):
    """
    Integrand of the Moebius gradient at ``t`` for parameters ``s``:

        2 [2 P(gamma(s) - gamma(t)) / |.|^2 - kappa N(t)] |gamma'(s)| / |.|^2,

    where ``P`` projects onto the normal plane of the tangent at ``t``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    pt = curve.position(t)[0]
    vt = curve.velocity(t)[0]
    at = curve.acceleration(t)[0]
    T = vt / np.linalg.norm(vt)
    # kappa N = normal component of the acceleration over speed^2
    kN = (at - np.dot(at, T) * T) / np.dot(vt, vt)
    d = curve.position(s) - pt
    d2 = np.einsum("ij,ij->i", d, d)
    proj = d - np.outer(d @ T, T)
    inner = 2 * proj / d2[:, None] - kN[None, :]
    return 2 * inner * (curve.speed(s) / d2)[:, None]


def mobius_gradient_field(curve: Curve, t: float, tol: float = 1e-8,
                          panel_width: float | None = None) -> np.ndarray:
    """
    Moebius gradient at parameter ``t``.

    The integral is a principal value: parameters are paired as
    ``t + h`` and ``t - h`` so the odd singular part cancels exactly. On
    ``0 < h < delta`` the paired integrand is replaced by ``g0 + g2 h^2``
    fitted through ``h = delta`` and ``h = 2 delta``.
    """
    t = float(t)
    a, b = curve.domain
    if curve.closed:
        H = 0.5 * curve.period
    else:
        if not a <= t <= b:
            raise DomainError("t must lie in the curve's domain")
        H = max(t - a, b - t)
    delta = 5 * _window(curve, t)
    if 2 * delta >= H:
        raise DomainError("curve too short for the diagonal window")

    def paired(h):
        h = np.atleast_1d(h)
        out = np.zeros((h.size, 3))
        for sgn in (1.0, -1.0):
            s = t + sgn * h
            ok = np.ones(h.size, dtype=bool) if curve.closed else (s >= a) & (s <= b)
            if np.any(ok):
                out[ok] += gradient_integrand(curve, t, s[ok])
        return out

    g1, g2v = paired(np.array([delta, 2 * delta]))
    c2 = (g2v - g1) / (3 * delta * delta)
    c0 = g1 - c2 * delta * delta
    near = c0 * delta + c2 * delta**3 / 3
    width = panel_width if panel_width is not None else H / 64
    edges = _outer_edges(delta, H, width)
    out = np.empty(3)
    for i in range(3):
        out[i] = adaptive_gk(lambda h: paired(h)[:, i], edges, tol / 3).value
    return out + near
