"""Property-based checks over random pitches and indices."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from helix_mobius.asymptotics import g_bracket, g_series
from helix_mobius.kernel import e_rho, m_rho_real
from helix_mobius.quadrature import integrate_density
from helix_mobius.residue_series import approx_terms, d_k
from helix_mobius.roots import CERT_RHO, approx_root, error_bound, refine_roots, rouche_radius

rhos = st.floats(min_value=1e-3, max_value=50.0)
small_rhos = st.floats(min_value=1e-4, max_value=CERT_RHO * 0.999)
ks = st.integers(min_value=1, max_value=10**6)


@given(rhos, st.floats(min_value=-200, max_value=200))
def test_density_positive_even(rho, t):
    v = m_rho_real(rho, t)
    assert v > 0
    assert v == m_rho_real(rho, -t)


@given(rhos, st.floats(min_value=1e-3, max_value=200))
def test_density_below_pole_free_envelope(rho, t):
    # chord <= arc gives M <= (rho^2+1)/(rho^2 t^2 + 4 sin^2(t/2)) <= (rho^2+1)/(rho^2 t^2)
    assert m_rho_real(rho, t) <= (rho * rho + 1) / (rho * rho * t * t) + 1e-15


@given(small_rhos, ks)
def test_certified_root_within_bound(rho, k):
    _, z, _, bound, cert, _ = refine_roots(rho, np.array([k]))
    assert cert[0]
    assert abs(z[0] - approx_root(rho, k)) <= bound[0]
    assert abs(e_rho(rho, z[0])) <= 1e-9 * abs(z[0]) ** 2


@given(st.floats(min_value=1e-4, max_value=0.999), ks)
def test_rouche_radius_bounded(rho, k):
    assert rouche_radius(rho, k) <= 2 * math.sqrt(5) * rho
    assert error_bound(rho, k) <= 2 * math.sqrt(5) * rho


@given(rhos, ks)
def test_w_terms_sign_and_non_tangency(rho, k):
    term = approx_terms(rho, k)
    assert term.imag < 0
    assert abs(term.imag) >= math.pi / math.sqrt(math.pi**2 + 1) * abs(term) * (1 - 1e-12)


@given(st.floats(min_value=1e-6, max_value=1.0), st.integers(min_value=1, max_value=10**5))
def test_dk_real_part(rho, k):
    assert d_k(rho, k).real >= math.hypot(k * math.pi * rho, 1)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1.0))
def test_g_in_bracket(rho):
    lo, hi = g_bracket(rho)
    assert lo <= g_series(rho) - math.log(1 / rho) <= hi


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=1.0, max_value=100.0))
def test_sandwich(rho):
    v = integrate_density(rho, 1e-10).value
    assert math.pi / (3 * (rho * rho + 1)) - 1e-10 <= v <= math.pi / (3 * rho * rho) + 1e-10
