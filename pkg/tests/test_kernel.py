import math

import numpy as np
import pytest

from helix_mobius.exceptions import DomainError
from helix_mobius.kernel import (as_rho, e_rho, e_rho_prime, m_rho_complex, m_rho_real,
                                 m_rho_sinc_form)
from helix_mobius.roots import approx_root

M_HALF_PI = 0.091955834532298560236  # mpmath
M_ONE_1EM3 = 0.041666667013888870288


def test_m_rho_exact_values():
    assert m_rho_real(1.0, 2 * math.pi) == pytest.approx(1 / (4 * math.pi**2), rel=1e-14)
    assert m_rho_real(1.0, 0.0) == pytest.approx(1 / 24, rel=1e-15)
    assert m_rho_real(0.5, math.pi) == pytest.approx(M_HALF_PI, rel=1e-14)
    assert m_rho_real(1.0, 1e-3) == pytest.approx(M_ONE_1EM3, rel=1e-12)


def test_m_rho_continuous_at_origin():
    t = np.array([0.0, 1e-12, 1e-8, 1e-5, 1e-3])
    v = m_rho_real(0.3, t)
    assert np.all(np.abs(v - v[0]) < 1e-6)


def test_m_rho_even_and_positive():
    t = np.linspace(0.01, 50, 2001)
    for rho in (0.05, 1.0, 10.0):
        assert np.array_equal(m_rho_real(rho, t), m_rho_real(rho, -t))
        assert np.all(m_rho_real(rho, t) > 0)


def test_sinc_form_agrees():
    t = np.linspace(0.0, 40.0, 401)
    np.testing.assert_allclose(m_rho_sinc_form(0.7, t), m_rho_real(0.7, t), rtol=1e-12)


def test_complex_restricts_to_real():
    t = np.linspace(0.1, 30, 300)
    np.testing.assert_allclose(m_rho_complex(0.5, t + 0j).real, m_rho_real(0.5, t), rtol=1e-12)
    np.testing.assert_allclose(m_rho_complex(0.5, t + 0j).imag, 0.0, atol=1e-15)


def test_complex_off_pole_finite():
    v = m_rho_complex(0.05, approx_root(0.05, 1) + 0.5j)
    assert np.isfinite(v)


def test_e_rho_values():
    assert e_rho(0.3, 0.0) == 0
    assert e_rho(1.0, 2 * math.pi) == pytest.approx(4 * math.pi**2, rel=1e-14)
    rho, k = 0.05, 1
    a = math.asinh(k * math.pi * rho)
    closed = 4 * k * math.pi * rho**2 * (-a * a / (k * math.pi) + 2j * a)
    assert abs(e_rho(rho, approx_root(rho, k)) - closed) < 1e-14


def test_e_rho_prime_is_derivative():
    z = 3.0 + 0.7j
    h = 1e-6
    fd = (e_rho(0.4, z + h) - e_rho(0.4, z - h)) / (2 * h)
    assert abs(fd - e_rho_prime(0.4, z)) < 1e-7


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_as_rho_rejects(bad):
    with pytest.raises(DomainError):
        as_rho(bad)


def test_overflow_guard():
    from helix_mobius.exceptions import OverflowGuardError
    with pytest.raises(OverflowGuardError):
        e_rho(0.5, 1.0 + 800j)
