import math

import numpy as np
import pytest

from helix_mobius.quadrature import integrate_density
from helix_mobius.residue_series import (approx_sum, approx_terms, d_k, eta_bound, residue_sum,
                                         residue_terms, series_cutoff)
from helix_mobius.roots import approx_root, refine_roots

I_REF = {0.05: 62.628797745212749676, 0.5: 2.3689525480388881362, 1.0: 0.80450482679217823768}


def test_approx_terms_closed_form():
    for rho, k in ((0.05, 1), (0.7, 13)):
        w = approx_root(rho, k)
        direct = 1 / (2 * rho * rho * w + 2 * np.sin(w))
        assert abs(approx_terms(rho, k) - direct) < 1e-12 * abs(direct)
        a = math.asinh(k * math.pi * rho)
        closed = 4 * k * math.pi * rho * (rho + 1j * (a * rho / (k * math.pi) + math.hypot(k * math.pi * rho, 1)))
        assert abs(1 / approx_terms(rho, k) - closed) < 1e-12 * abs(closed)


def test_term_signs():
    ks = np.arange(1, 5001)
    assert np.all(approx_terms(0.05, ks).imag < 0)
    _, z, *_ = refine_roots(0.05, ks[:100])
    assert np.all(residue_terms(0.05, z).imag < 0)


@pytest.mark.parametrize("rho", [0.05, 0.5, 1.0])
def test_residue_sum_matches_oracle(rho):
    est = residue_sum(rho, 1e-9)
    assert abs(est.value - I_REF[rho]) < 2e-9
    assert est.tail_bound <= 1e-9 / 2


def test_certification_flag():
    assert residue_sum(0.05, 1e-6).certified
    assert not residue_sum(0.5, 1e-6).certified


def test_residue_sum_decreasing():
    assert residue_sum(0.05, 1e-6).value > residue_sum(0.1, 1e-6).value


def test_approx_sum_near_residue_sum():
    a = approx_sum(0.05, 1e-8).value
    r = residue_sum(0.05, 1e-8).value
    assert abs(a - r) / r < 0.05
    a4 = approx_sum(1e-4, 1e-6, relative=True).value
    assert 0.9 < a4 / (math.log(1e4) / 1e-4) < 1.05


def test_partial_sums_monotone():
    w = -4 * math.pi * (0.3**2 + 1) * approx_terms(0.3, np.arange(1, 2001)).imag
    assert np.all(w > 0)
    assert np.all(np.diff(np.cumsum(w)) > 0)


def test_cutoff_bounds_tail():
    from scipy import integrate
    tr = series_cutoff(0.2, 1e-7, use_roots=False)
    n = 40 * tr.cutoff
    ks = np.arange(tr.cutoff + 1, n + 1)
    dd = d_k(0.2, ks)
    weight = lambda t: (0.2**2 + 1) / 0.2 * d_k(0.2, t).real / (t * abs(d_k(0.2, t)) ** 2)  # noqa: E731
    # beyond n the midpoint integral is accurate far below tail_bound
    a = n + 0.5
    far, _ = integrate.quad(lambda x: weight(a / x) * a / (x * x), 0.0, 1.0, epsrel=1e-12, limit=200)
    partial = math.fsum(((0.2**2 + 1) / 0.2 * dd.real / (ks * np.abs(dd) ** 2)).tolist()) + far
    assert partial <= tr.tail_bound + tr.tail_estimate
    assert abs(partial - tr.tail_estimate) <= tr.tail_bound


def test_eta_bound_range():
    ks = np.arange(1, 10_001)
    assert np.all(eta_bound(0.01, ks) <= 11 * math.sqrt(5) / 2 * 0.01 + 1e-15)


def test_cross_method_quadrature():
    for rho in (0.1, 2.0):
        q = integrate_density(rho, 1e-10).value
        r = residue_sum(rho, 1e-9, relative=True).value
        assert abs(r - q) / q < 1e-8
