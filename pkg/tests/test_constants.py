import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from homhardy import constants as C, weights as W
from homhardy.alpha_mu import build_curve
from homhardy.errors import DomainError, UsageError


@pytest.mark.parametrize("d", [3, 4, 5, 6, 9])
def test_main_classical_constant(d):
    p = max(2.0, (d - 2) ** 2 / (2 * (d - 1)) + 1)
    norm = W.lp_norm(W.Constant(1), p, d)
    assert_allclose(C.tau_theorem_main(d, p, norm), (d - 2) ** 2 / 4, rtol=1e-12)


def test_main_scales_inversely_with_amplitude():
    n1 = W.lp_norm(W.CapIndicator(1, 1.0), 2.0, 4)
    n3 = W.lp_norm(W.CapIndicator(3, 1.0), 2.0, 4)
    assert_allclose(C.tau_theorem_main(4, 2.0, n1), 3 * C.tau_theorem_main(4, 2.0, n3), rtol=1e-13)


def test_main_range():
    with pytest.raises(DomainError):
        C.tau_theorem_main(4, 1.6, 1.0)
    with pytest.raises(DomainError):
        C.tau_theorem_main(3, 2.0, 0.0)


def test_nu0_values():
    assert_allclose(C.nu0(3, 1.125), 0.5)
    assert_allclose(C.nu0(4, 5 / 3), 1.0)
    with pytest.raises(DomainError):
        C.nu0(3, 1.0)


def test_theorem2_example():
    norm = W.lp_norm(W.Constant(1), 1.125, 3)
    n0, tau = C.tau_theorem2(3, 1.125, norm)
    assert_allclose((n0, tau), (0.5, 0.125), rtol=1e-13)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_theorem2_meets_main_at_critical_p(d):
    pc = (d - 2) ** 2 / (2 * (d - 1)) + 1
    norm = W.lp_norm(W.CapIndicator(2.0, 0.9), pc, d)
    n0, tau2 = C.tau_theorem2(d, pc, norm)
    assert_allclose(n0, 1.0, rtol=1e-12)
    assert_allclose(tau2, C.tau_theorem_main(d, pc, norm), rtol=1e-12)


@pytest.fixture(scope="module")
def curve():
    return build_curve(4, 1.6, n_samples=8, max_ratio=1.2, n_near=16)


def test_theorem4_monotone_and_above_theorem2(curve):
    norm = W.lp_norm(W.Constant(1), 1.6, 4)
    n0, tau2 = C.tau_theorem2(4, 1.6, norm)
    nus = np.linspace(n0 + 0.01, 1.0, 10)
    taus = [C.tau_theorem4(4, 1.6, nu, norm, curve) for nu in nus]
    assert np.all(np.diff(taus) > 0)
    assert taus[0] > tau2


def test_theorem4_rejects_bad_nu(curve):
    norm = W.lp_norm(W.Constant(1), 1.6, 4)
    with pytest.raises(DomainError):
        C.tau_theorem4(4, 1.6, 0.5, norm, curve)
    with pytest.raises(DomainError):
        C.tau_theorem4(4, 1.6, 1.1, norm, curve)
    with pytest.raises(UsageError):
        C.tau_theorem4(4, 1.55, 1.0, W.lp_norm(W.Constant(1), 1.55, 4), curve)


def test_constants_records(curve):
    norm = W.lp_norm(W.Constant(1), 1.6, 4)
    rec = C.constants_theorem4(4, 1.6, 1.0, norm, curve)
    assert rec.alpha == 1.0 and rec.mu == curve.mu(1.0)
    assert "mu(nu" in rec.to_dict()["formula"]
    assert C.constants_main2(4, 1.6, norm).nu == C.nu0(4, 1.6)


@pytest.mark.parametrize("d", range(3, 9))
def test_fractional_kappa_one(d):
    p = d / 2
    norm = W.lp_norm(W.Constant(1), p, d)
    assert_allclose(C.tau_fractional(d, 1.0, norm), (d - 2) ** 2 / 4, rtol=1e-12)


def test_c_kappa_against_gamma():
    for d, k in [(3, 0.5), (4, 0.25), (7, 1.0), (2, 0.9)]:
        ref = 2 ** (-2 * k) * (math.gamma((d / 2 - k) / 2) / math.gamma((d / 2 + k) / 2)) ** 2
        assert_allclose(C.c_kappa(d, k), ref, rtol=1e-13)


def test_c_kappa_large_dimension_finite():
    assert math.isfinite(C.c_kappa(400, 1.0)) and C.c_kappa(400, 1.0) > 0


def test_fractional_kappa_range():
    with pytest.raises(DomainError):
        C.tau_fractional(3, 1.2, 1.0)
    with pytest.raises(DomainError):
        C.tau_fractional(2, 1.0, 1.0)
    C.tau_fractional(2, 0.9, 1.0)


@given(d=st.integers(3, 12), k=st.floats(0.05, 1.0))
@settings(max_examples=40, deadline=None)
def test_fractional_positive_and_decreasing_in_norm(d, k):
    a, b = C.tau_fractional(d, k, 1.0), C.tau_fractional(d, k, 2.0)
    assert a > 0
    assert math.isclose(a, 2 * b, rel_tol=1e-13)


@pytest.mark.parametrize("d", range(3, 10))
def test_embedding_strict(d):
    e = C.embedding_exponents(d)
    assert e["strict"]
    assert_allclose(e["difference"], (d - 2) / (2 * (d - 1)), rtol=1e-13)


def test_half_sphere_cap_values_d3():
    cap = W.CapIndicator(1.0, math.pi / 2)
    assert_allclose(C.tau_theorem_main(3, 1.25, W.lp_norm(cap, 1.25, 3)), 2 ** 0.8 / 4, rtol=1e-13)
    assert_allclose(C.tau_fractional(3, 1.0, W.lp_norm(cap, 1.5, 3)), 2 ** (2 / 3) / 4, rtol=1e-13)
