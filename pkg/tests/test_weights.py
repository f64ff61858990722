import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from homhardy import sphere, weights as W
from homhardy.errors import DomainError, NotInLpError, SingularPointError, UsageError
from oracles import polar_power_integral


def test_evaluate_examples():
    assert W.evaluate(W.Constant(3), 1.0) == 3
    cap = W.CapIndicator(1, math.pi / 2)
    assert W.evaluate(cap, math.pi / 4) == 1 and W.evaluate(cap, 2.0) == 0
    assert_allclose(W.evaluate(W.PolarPower(1, 0.5), 0.25), 2.0, rtol=1e-15)


def test_polar_power_singular_point():
    with pytest.raises(SingularPointError):
        W.evaluate(W.PolarPower(1, 0.5), 0.0)


@pytest.mark.parametrize("bad", [lambda: W.Constant(-1), lambda: W.CapIndicator(1, 0),
                                 lambda: W.CapIndicator(-1, 1), lambda: W.PolarPower(1, -0.5),
                                 lambda: W.Tabulated((0.5, 0.4), (1, 1)),
                                 lambda: W.Tabulated((0.5, 1.0), (1, -1)),
                                 lambda: W.CosineSeries((0.0, 1.0))])
def test_construction_invariants(bad):
    with pytest.raises(DomainError):
        bad()


def test_lp_norm_closed_forms():
    assert_allclose(W.lp_norm(W.Constant(1), 1.25, 3), (4 * math.pi) ** 0.8, rtol=1e-14)
    assert_allclose(W.lp_norm(W.CapIndicator(1, math.pi / 2), 1.5, 3), (2 * math.pi) ** (2 / 3), rtol=1e-14)


@pytest.mark.parametrize("spec", [W.Constant(2.0), W.CapIndicator(1.5, 1.1)])
@pytest.mark.parametrize("d, p", [(3, 2.0), (5, 1.7)])
def test_closed_form_matches_quadrature(spec, d, p):
    assert_allclose(W.lp_norm(spec, p, d), W.lp_norm_quadrature(spec, p, d), rtol=1e-12)


def test_polar_power_norm_against_oracle():
    val = W.lp_norm(W.PolarPower(1, 0.5), 2, 3)
    assert_allclose(val, polar_power_integral(3, 1.0) ** 0.5, rtol=1e-8)


def test_polar_power_integrability_margin():
    with pytest.raises(NotInLpError) as exc:
        W.lp_norm(W.PolarPower(1, 1.0), 2, 3)
    assert_allclose(exc.value.critical, 2.0)
    W.lp_norm(W.PolarPower(1, 0.99), 2, 3)


@given(a=st.floats(0, 50), p=st.floats(1, 6))
@settings(max_examples=30, deadline=None)
def test_norm_homogeneous_in_amplitude(a, p):
    base = W.Tabulated((0.2, 1.0, 2.5), (0.3, 1.2, 0.7))
    assert_allclose(W.lp_norm(base.scaled(a), p, 4), a * W.lp_norm(base, p, 4), rtol=1e-13, atol=1e-300)


@given(c=st.floats(0.01, 100), p=st.floats(1, 8), d=st.integers(3, 8))
@settings(max_examples=30, deadline=None)
def test_constant_norm_identity(c, p, d):
    assert_allclose(W.lp_norm(W.Constant(c), p, d), c * sphere.surface_area(d) ** (1 / p), rtol=1e-13)


def test_normalized_norm_monotone_in_p():
    rng = np.random.default_rng(3)
    for _ in range(10):
        vals = rng.random(8)
        spec = W.Tabulated(tuple(np.linspace(0.1, 3.0, 8)), tuple(vals))
        ps = [1.0, 1.5, 2.0, 3.0, 5.0]
        norms = [W.lp_norm(spec, p, 3) / sphere.surface_area(3) ** (1 / p) for p in ps]
        assert np.all(np.diff(norms) >= -1e-12)


def test_tabulated_constant_extension():
    spec = W.Tabulated((0.5, 1.0), (2.0, 4.0))
    assert_allclose(spec(np.array([0.1, 0.75, 3.0])), [2.0, 3.0, 4.0])


def test_admissible_examples():
    one = W.Constant(1)
    ok, rng = W.admissible(one, 3, 1.25, "main")
    assert ok and rng.lower_closed and rng.lower == 1.25
    assert W.admissible(one, 4, 5 / 3, "main")[0]
    assert not W.admissible(one, 4, 1.6, "main")[0]
    assert W.admissible(one, 3, 1.1, "main2")[0]
    assert not W.admissible(one, 3, 1.0, "main2")[0]
    assert not W.admissible(one, 3, 1.25, "main2")[0]


def test_admissible_checks_integrability():
    ok, _ = W.admissible(W.PolarPower(1, 1.0), 3, 2.5, "main")
    assert not ok


def test_admissible_unknown_theorem():
    with pytest.raises(UsageError):
        W.admissible(W.Constant(1), 3, 2.0, "nope")


def test_tabulated_s2():
    th = np.linspace(0.1, 3.0, 6)
    ph = np.linspace(0, 2 * math.pi, 8, endpoint=False)
    vals = 1 + np.outer(np.cos(th), np.cos(ph)) ** 2
    spec = W.TabulatedS2(tuple(th), tuple(ph), tuple(map(tuple, vals)))
    assert not spec.axisymmetric
    assert_allclose(spec(np.array([th[2]]), np.array([ph[3]])), [vals[2, 3]], rtol=1e-12)


@pytest.mark.parametrize("a", [2.2e-242, 1e200])
def test_norm_survives_extreme_amplitudes(a):
    base = W.Tabulated((0.2, 1.0, 2.5), (0.3, 1.2, 0.7))
    assert_allclose(W.lp_norm(base.scaled(a), 2.0, 4), a * W.lp_norm(base, 2.0, 4), rtol=1e-13)
