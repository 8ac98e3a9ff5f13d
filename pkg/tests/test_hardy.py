import math

import numpy as np
import pytest
from scipy.integrate import quad

from growthlab.errors import DivergentRhs, NoDecay
from growthlab.exponents import Exponent, admissible_interval
from growthlab.hardy import (
    RadialProfile,
    hardy_exponential,
    hardy_pair_power_above,
    hardy_pair_power_below,
    hardy_sup_power_above,
    hardy_sup_power_below,
    ok_criterion,
)

CONST = RadialProfile(lambda r: np.ones_like(np.asarray(r, float)),
                      lambda r: np.zeros_like(np.asarray(r, float)))
LINEAR = RadialProfile(lambda r: np.asarray(r, float),
                       lambda r: np.ones_like(np.asarray(r, float)))


def decaying_power(t):
    return RadialProfile(
        lambda r: (1 + np.asarray(r, float)) ** t,
        lambda r: t * (1 + np.asarray(r, float)) ** (t - 1),
        decay_at_infinity=True,
    )


def test_constant_profile_zero_lhs():
    lhs, rhs = hardy_pair_power_above(CONST, 0.0, 2, 2, 1.0, 1)
    assert lhs == 0.0 and rhs == 0.0
    lhs, _ = hardy_sup_power_above(CONST, 0.5, 2, 1.0, 2)
    assert lhs == 0.0


def test_pair_above_closed_form():
    # s = 0.6 keeps the derivative side integrable for f(r) = r
    lhs, rhs = hardy_pair_power_above(LINEAR, 0.6, 2, 2, 1.0, 1)
    L, _ = quad(lambda r: (1 + r) ** (-1.6 * 2 - 1) * (r - 1) ** 2, 1, np.inf)
    R, _ = quad(lambda r: (1 + r) ** (-0.6 * 2 - 1), 1, np.inf)
    assert abs(lhs - math.sqrt(L)) < 1e-6
    assert abs(rhs - math.sqrt(R)) < 1e-7
    assert lhs <= 2.0 * rhs


def test_pair_above_divergent_rhs():
    # at s = 0 the derivative integrand of f(r) = r is (1+r)^{-1}: divergent
    with pytest.raises(DivergentRhs):
        hardy_pair_power_above(LINEAR, 0.0, 2, 2, 1.0, 1)


def test_sup_above_log_profile():
    f = RadialProfile(lambda r: np.log1p(np.asarray(r, float)),
                      lambda r: 1.0 / (1 + np.asarray(r, float)))
    lhs, rhs = hardy_sup_power_above(f, 0.0, 3, 1.0, 1)
    assert 0 < lhs < math.inf and 0 < rhs < math.inf


def test_sup_above_rhs_monotone_in_R():
    f = decaying_power(-1.0)
    rhs_vals = [hardy_sup_power_above(f, 0.2, 2, R, 2)[1] for R in (1.0, 2.0, 4.0)]
    assert rhs_vals[0] >= rhs_vals[1] >= rhs_vals[2]


def test_pair_below_closed_form():
    f = decaying_power(-2.0)
    lhs, rhs = hardy_pair_power_below(f, -2.0, 2, 2, 3)
    L, _ = quad(lambda r: (1 + r) ** (2 - 3) * r**2 * (1 + r) ** (-4), 0, np.inf)
    R, _ = quad(lambda r: (1 + r) ** (4 - 3) * r**2 * 4 * (1 + r) ** (-6), 0, np.inf)
    assert abs(lhs - math.sqrt(L)) < 1e-8
    assert abs(rhs - math.sqrt(R)) < 1e-8


def test_pair_below_zero_profile():
    z = RadialProfile(lambda r: np.zeros_like(np.asarray(r, float)),
                      lambda r: np.zeros_like(np.asarray(r, float)),
                      decay_at_infinity=True)
    lhs, rhs = hardy_pair_power_below(z, -2.0, 2, 2, 3)
    assert lhs == 0.0 and rhs == 0.0


def test_pair_below_exponential_profile():
    f = RadialProfile(lambda r: np.exp(-np.asarray(r, float)),
                      lambda r: -np.exp(-np.asarray(r, float)),
                      decay_at_infinity=True)
    lhs, rhs = hardy_pair_power_below(f, -3.0, 1, 1.5, 3)
    assert 0 < lhs < math.inf and 0 < rhs < math.inf


def test_below_requires_decay_flag():
    f = RadialProfile(lambda r: (1 + np.asarray(r, float)) ** -2.0)
    with pytest.raises(NoDecay):
        hardy_pair_power_below(f, -2.0, 2, 2, 3)
    with pytest.raises(NoDecay):
        hardy_sup_power_below(f, -2.0, 4, 3)


def test_sup_below():
    f = decaying_power(-2.0)
    lhs, rhs = hardy_sup_power_below(f, -2.0, 4, 3)
    assert 0 < lhs < math.inf and 0 < rhs < math.inf
    # rhs over (R, inf) shrinks with R
    rhs_vals = [hardy_sup_power_below(f, -2.0, 4, 3, big_r=R)[1] for R in (0.0, 1.0, 2.0)]
    assert rhs_vals[0] >= rhs_vals[1] >= rhs_vals[2]


def test_exponential_above_closed_form():
    lhs, rhs = hardy_exponential(LINEAR, 1.0, 2, 1, "above", rho=1.0)
    L, _ = quad(lambda r: np.exp(-2 * r) * (r - 1) ** 2, 1, 20)
    R, _ = quad(lambda r: np.exp(-2 * r), 1, 20)
    assert abs(lhs - math.sqrt(L)) < 1e-9
    assert abs(rhs - math.sqrt(R)) < 1e-9


def test_exponential_below_closed_form():
    f = RadialProfile(lambda r: np.exp(-2 * np.asarray(r, float)),
                      lambda r: -2 * np.exp(-2 * np.asarray(r, float)),
                      decay_at_infinity=True)
    lhs, rhs = hardy_exponential(f, -1.0, 2, 3, "below")
    # e^{2r} r^2 e^{-4r} = r^2 e^{-2r}, integral 1/4
    assert abs(lhs - 0.5) < 1e-10
    assert abs(rhs - 1.0) < 1e-10


def test_exponential_below_needs_fast_decay():
    # decay slower than the weight growth: e^{2r} e^{-r} r^2 grows, divergent
    slow = RadialProfile(lambda r: np.exp(-0.5 * np.asarray(r, float)),
                         lambda r: -0.5 * np.exp(-0.5 * np.asarray(r, float)),
                         decay_at_infinity=True)
    with pytest.raises(DivergentRhs):
        hardy_exponential(slow, -1.0, 2, 3, "below")


@pytest.mark.parametrize("s", [-1.5, -2.0, -3.7])
@pytest.mark.parametrize("p", [1, 2, 3, 5])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_criterion_matches_interval(s, p, n):
    interval = admissible_interval(1, p, n)
    qs = {Exponent(p), Exponent(p + 1), Exponent(p + 2)}
    if not interval.upper.is_inf:
        qs.add(interval.upper)
        qs.add(Exponent(interval.upper.fraction + 1))
    for q in qs:
        _, verdict = ok_criterion(s, p, q, n)
        assert (verdict == "finite") == interval.contains(q), (s, p, q, n)


def test_criterion_sup_variant():
    # q = infinity is admissible exactly when p > N
    assert ok_criterion(-2.0, 3, "inf", 2)[1] == "finite"
    assert ok_criterion(-2.0, 2, "inf", 2)[1] == "divergent"
    assert ok_criterion(-2.0, 2, "inf", 3)[1] == "divergent"


def test_criterion_quantities():
    sup, verdict = ok_criterion(-2.0, 2, 2, 3)
    assert verdict == "finite" and 0 < sup < math.inf


def test_profile_from_field():
    from growthlab.fields import make_field

    g = make_field("gaussian", 3, a=1.0)
    f = RadialProfile.from_field(g, decay=True)
    r = np.array([0.5, 1.5])
    assert np.allclose(f.value(r), np.exp(-(r**2)))
    assert np.allclose(f.d(r), -2 * r * np.exp(-(r**2)))


def test_fd_fallback_derivative():
    f = RadialProfile(lambda r: np.sin(np.asarray(r, float)))
    r = np.array([0.3, 1.1, 2.5])
    assert np.allclose(f.d(r), np.cos(r), atol=1e-8)
