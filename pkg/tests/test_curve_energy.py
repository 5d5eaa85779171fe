import math

import numpy as np
import pytest

from helix_mobius.curve_energy import (SampledCurve, circle_curve, ellipse_curve, gradient_integrand,
                                       helix_curve, mobius_gradient_field, pointwise_energy,
                                       read_curve_csv, segment_curve, total_energy,
                                       truncated_helix_bound, truncated_helix_energy,
                                       write_curve_csv)
from helix_mobius.exceptions import CostGuardError, DegeneracyError, DomainError
from helix_mobius.kernel import m_rho_real
from helix_mobius.quadrature import integrate_density

TRUNC_5 = 5.12408846099844337e-4  # mpmath double integral
TRUNC_10 = 3.29961497034431363e-5


def test_circle_density_uniform():
    c = circle_curve()
    vals = [pointwise_energy(c, s).value for s in np.linspace(0, 2 * np.pi, 7)[:-1]]
    assert np.ptp(vals) < 1e-9
    # chord 2 sin(h/2), arc h: int_{-pi}^{pi} (1/(4 sin^2(h/2)) - 1/h^2) dh = 2/pi
    assert vals[0] == pytest.approx(2 / math.pi, rel=1e-8)


def test_scaling():
    # the density scales like 1/length; the total energy is scale invariant
    assert 3 * pointwise_energy(circle_curve(3.0), 0.4).value == pytest.approx(2 / math.pi, rel=1e-8)
    assert total_energy(circle_curve(3.0), n_outer=8) == pytest.approx(4.0, rel=1e-7)


def test_segment_zero():
    assert pointwise_energy(segment_curve(2.0), 0.7).value == pytest.approx(0.0, abs=1e-14)


def test_helix_density_is_m_integral():
    rho = 1.0
    c = helix_curve(rho, 40.0)
    v = pointwise_energy(c, 0.0, tol=1e-11).value
    h = np.linspace(-40, 40, 2_000_001)
    direct = np.trapezoid(m_rho_real(rho, h), h) / math.sqrt(rho * rho + 1)
    assert v == pytest.approx(direct, rel=1e-6)


def test_helix_matches_integral():
    rho = 0.5
    I = integrate_density(rho, 1e-10).value
    tol = 1e-5 * I / 2
    T = 4 / (rho * rho * tol)
    v = pointwise_energy(helix_curve(rho, T), 0.0, tol=tol / 4, panel_width=16 * math.pi).value
    assert abs(math.sqrt(rho * rho + 1) * v - I) / I < 1e-5


def test_helix_truncation_rate():
    rho = 1.0
    I = integrate_density(rho, 1e-11).value
    errs = []
    for T in (50.0, 100.0, 200.0):
        v = pointwise_energy(helix_curve(rho, T), 0.0, tol=1e-11, panel_width=4 * math.pi).value
        errs.append(I - math.sqrt(2) * v)
    assert all(0 < e <= 2 / (rho * rho * T) for e, T in zip(errs, (50.0, 100.0, 200.0)))
    assert errs[0] > errs[1] > errs[2]


def test_other_exponents():
    e = ellipse_curve(2.0, 1.0)
    v22 = pointwise_energy(e, 0.3, 2, 2).value
    v31 = pointwise_energy(e, 0.3, 2.5, 1).value
    assert v22 > 0 and v31 > 0
    with pytest.raises(DomainError):
        pointwise_energy(e, 0.3, 4, 1)
    with pytest.raises(DomainError):
        pointwise_energy(e, 0.3, 0.5, 1)


def test_total_energy_circle():
    # 2 pi * (2/pi) * circumference-normalised: E = 4 for the unit circle
    assert total_energy(circle_curve(), n_outer=16) == pytest.approx(4.0, rel=1e-7)


def test_degenerate_curve():
    # a figure eight: gamma(0) = gamma(pi)
    t = np.linspace(0, 2 * np.pi, 201)
    c = SampledCurve(np.c_[np.sin(2 * t), np.sin(t), 0 * t], params=t)
    with pytest.raises(DegeneracyError):
        pointwise_energy(c, 0.0, max_panels=20_000)


def test_truncated_helix():
    assert truncated_helix_energy(5.0, 1.0) == pytest.approx(TRUNC_5, rel=1e-9)
    assert truncated_helix_energy(10.0, 1.0) == pytest.approx(TRUNC_10, rel=1e-9)
    assert truncated_helix_energy(5.0, 1.0) <= 2 * (math.pi / 3) * math.sqrt(26) / 125
    assert truncated_helix_energy(10.0, 1.0) < truncated_helix_energy(5.0, 1.0)
    assert truncated_helix_bound(5.0, 1.0) == pytest.approx(2 * (math.pi / 3) * math.sqrt(26) / 125)


def test_truncated_helix_linear_in_height():
    # E = 2L I - O(log L) with L = N/rho, so doubling N doubles E up to O(1/N)
    dev = []
    for n in (100.0, 1000.0, 10000.0):
        dev.append(truncated_helix_energy(5.0, 2 * n) / truncated_helix_energy(5.0, n) - 2)
    assert 0 < dev[2] < dev[1] < dev[0]
    assert dev[2] < 5e-3


def test_truncated_helix_cost_guard():
    with pytest.raises(CostGuardError):
        truncated_helix_energy(1e-3, 1e4, max_panels=1000)


def test_csv_round_trip(tmp_path):
    t = np.linspace(0, 2 * np.pi, 65)[:-1]
    pts = np.c_[np.cos(t), np.sin(t), 0 * t]
    path = tmp_path / "c.csv"
    write_curve_csv(path, t, pts, closed=True)
    c = read_curve_csv(path)
    assert c.closed
    np.testing.assert_allclose(c.position(t[:5]), pts[:5], atol=1e-15)
    assert pointwise_energy(c, t[3]).value == pytest.approx(2 / math.pi, rel=1e-5)


def test_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(DomainError):
        read_curve_csv(p)


def test_circle_gradient():
    c = circle_curve()
    g = np.array([mobius_gradient_field(c, t) for t in np.linspace(0, 2 * np.pi, 5)[:-1]])
    mags = np.linalg.norm(g, axis=1)
    assert np.ptp(mags) < 1e-6
    # the round circle is a critical point
    assert np.all(mags < 1e-8)


def test_gradient_rotation_equivariance():
    Q = np.array([[0.36, 0.48, -0.8], [-0.8, 0.6, 0.0], [0.48, 0.64, 0.6]])
    e = ellipse_curve(2.0, 1.0)
    from helix_mobius.curve_energy import AnalyticCurve
    r = AnalyticCurve(position=lambda t: e.position(t) @ Q.T, velocity=lambda t: e.velocity(t) @ Q.T,
                      acceleration=lambda t: e.acceleration(t) @ Q.T, domain=e.domain, closed=True)
    g = mobius_gradient_field(e, 0.7)
    gr = mobius_gradient_field(r, 0.7)
    assert np.linalg.norm(g) > 1e-3
    np.testing.assert_allclose(gr, Q @ g, atol=1e-9)


def test_helix_long_range_axial():
    rho = 0.5
    c = helix_curve(rho, 500.0)
    axis = np.array([0.0, 0.0, 1.0])
    kN = np.array([-1.0, 0.0, 0.0]) / (1 + rho * rho)
    cos = []
    for h in (10.0, 100.0):
        for sgn in (1, -1):
            g = gradient_integrand(c, 0.0, np.array([sgn * h]))[0]
            # remove the constant curvature term; what is left points along the axis
            d = g + 2 * kN * c.speed(np.array([sgn * h]))[0] / np.sum((c.position(np.array([sgn * h]))[0] - c.position(np.array([0.0]))[0]) ** 2)
            assert np.sign(d @ axis) == sgn
            cos.append(abs(d @ axis) / np.linalg.norm(d))
    assert cos[2] > cos[0] and cos[3] > cos[1]
