import math

import numpy as np
import pytest

from growthlab.errors import DimensionOne, ExcludedS, NoConvergence
from growthlab.fields import lin_combine, make_field, multi_indices, product_field
from growthlab.norms import Scale
from growthlab.polynomials import (
    MultiIndexPolynomial,
    PiStrategy,
    ball_average_coeff,
    construct_pi,
    limit_coeff,
    poly_membership,
    taylor_coeff,
)


def constant_plus_bump(c, dim=3, R=2.0):
    return lin_combine(
        [(c, make_field("power", dim, t=0.0)), (1.0, make_field("bump", dim, R=R))],
        name=f"{c}+bump",
    )


def test_ball_average_examples():
    const = make_field("power", 3, t=0.0)
    assert abs(ball_average_coeff(const, (0, 0, 0)) - 1.0) < 1e-12

    sq = make_field("coord_poly", 3, alpha=(2, 0, 0))
    assert abs(ball_average_coeff(sq, (1, 0, 0))) < 1e-13  # odd integrand
    assert abs(ball_average_coeff(sq, (2, 0, 0)) - 1.0) < 1e-12  # (1/2!) * 2


def test_taylor_coeff_examples():
    sq = make_field("coord_poly", 2, alpha=(2, 0))
    assert abs(taylor_coeff(sq, (2, 0)) - 1.0) < 1e-12

    g = make_field("gaussian", 3)
    assert abs(taylor_coeff(g, (1, 0, 0))) < 1e-12

    import numpy as np
    from growthlab.fields import from_callable

    v = from_callable(3, lambda p: np.sqrt(1 + np.sum(p**2, axis=1)))
    assert abs(taylor_coeff(v, (0, 0, 0)) - 1.0) < 1e-12


def test_limit_coeff_examples():
    u = lin_combine(
        [(5.0, make_field("power", 3, t=0.0)), (1.0, make_field("power", 3, t=-2.0))]
    )
    assert abs(limit_coeff(u, (0, 0, 0), decay_exponent=-1.0) - 5.0) < 1e-6

    b = make_field("bump", 3, R=3.0)
    assert limit_coeff(b, (0, 0, 0), decay_exponent=-1.5) == 0.0

    w = lin_combine(
        [(3.0, make_field("coord_poly", 3, alpha=(1, 0, 0))),
         (1.0, make_field("gaussian", 3))]
    )
    assert abs(limit_coeff(w, (1, 0, 0), decay_exponent=-1.0) - 3.0) < 1e-9


def test_limit_coeff_no_convergence():
    u = make_field("power", 3, t=0.5)
    with pytest.raises(NoConvergence):
        limit_coeff(u, (0, 0, 0), decay_exponent=-1.0)


def test_constant_recovery_below():
    for c in (-2.0, 0.0, 5.0):
        u = constant_plus_bump(c)
        pi = construct_pi(u, 1, -2.0, 2)
        assert abs(pi.coeffs[(0, 0, 0)] - c) < 1e-4
        assert pi.provenance[(0, 0, 0)] == "limit"


def test_p_independence_below():
    u = constant_plus_bump(1.7)
    values = [construct_pi(u, 1, -2.0, p).coeffs[(0, 0, 0)] for p in (1, 2, 4)]
    assert max(values) - min(values) < 1e-6


def test_base_radius_invariance():
    u = constant_plus_bump(-0.4)
    a = construct_pi(u, 1, -2.0, 2, r0=8.0).coeffs[(0, 0, 0)]
    b = construct_pi(u, 1, -2.0, 2, r0=16.0).coeffs[(0, 0, 0)]
    assert abs(a - b) < 1e-5


def test_compact_support_zero_polynomial():
    for k in (1, 2, 3):
        u = make_field("bump", 3, R=3.0)
        pi = construct_pi(u, k, -k - 0.5, 2)
        assert all(abs(v) < 1e-8 for v in pi.coeffs.values())


def test_linear_part_recovery_k2():
    a, b = 1.5, -0.7
    u = lin_combine([
        (a, make_field("coord_poly", 3, alpha=(0, 0, 0))),
        (b, make_field("coord_poly", 3, alpha=(1, 0, 0))),
        (1.0, make_field("gaussian", 3)),
    ])
    pi = construct_pi(u, 2, -3.0 - 0.5, 2)
    assert abs(pi.coeffs[(0, 0, 0)] - a) < 1e-5
    assert abs(pi.coeffs[(1, 0, 0)] - b) < 1e-5
    assert abs(pi.coeffs[(0, 1, 0)]) < 1e-5
    assert abs(pi.coeffs[(0, 0, 1)]) < 1e-5


def test_taylor_strategy_above():
    g = make_field("gaussian", 3)
    pi = construct_pi(g, 1, 0.0, 4, strategy=PiStrategy.taylor())
    assert abs(pi.coeffs[(0, 0, 0)] - 1.0) < 1e-12
    with pytest.raises(ValueError):
        construct_pi(g, 1, 0.0, 2, strategy=PiStrategy.taylor())


def test_taylor_strategy_is_genuine_taylor_polynomial():
    # at a noncentered point the layered recursion must reproduce the Taylor
    # expansion in the monomial basis
    u = make_field("gaussian", 1, a=0.5)
    x0 = (0.7,)
    pi = construct_pi(u, 2, 0.5, 3, strategy=PiStrategy.taylor(x0))
    f = math.exp(-0.5 * 0.7**2)
    fp = -0.7 * f
    # taylor: f + fp (x - x0) = (f - fp x0) + fp x
    assert abs(pi.coeffs[(1,)] - fp) < 1e-9
    assert abs(pi.coeffs[(0,)] - (f - fp * 0.7)) < 1e-9


def test_component_stability():
    u = lin_combine([
        (2.0, make_field("coord_poly", 3, alpha=(0, 0, 0))),
        (1.0, make_field("bump", 3, R=2.0)),
    ])
    for s_pair, k in [((-2.3, -2.7), 2), ((-1.5, -1.7), 2), ((0.5, 2.0), 2)]:
        pis = [construct_pi(u, k, s, 2) for s in s_pair]
        for alpha in pis[0].coeffs:
            assert abs(pis[0].coeffs[alpha] - pis[1].coeffs[alpha]) < 1e-6, (s_pair, alpha)


def test_symmetrization_preserves_constant():
    from growthlab.fields import radial_symmetrize

    u = lin_combine([
        (2.0, make_field("power", 3, t=0.0)),
        (1.0, make_field("gaussian", 3)),
        (1.0, product_field(make_field("coord_poly", 3, alpha=(1, 0, 0)),
                            make_field("bump", 3, R=2.0))),
    ])
    us = radial_symmetrize(u)
    c_u = construct_pi(u, 1, -2.0, 2).coeffs[(0, 0, 0)]
    c_us = construct_pi(us, 1, -2.0, 2).coeffs[(0, 0, 0)]
    assert abs(c_u - c_us) < 1e-6


def test_linearity_fixed_strategy():
    u = constant_plus_bump(1.0)
    v = lin_combine([
        (-0.5, make_field("coord_poly", 3, alpha=(1, 0, 0))),
        (1.0, make_field("bump", 3, R=1.5)),
    ])
    k, s = 2, -2.5
    pi_u = construct_pi(u, k, s, 2)
    pi_v = construct_pi(v, k, s, 2)
    w = lin_combine([(1.0, u), (1.0, v)])
    pi_w = construct_pi(w, k, s, 2)
    for alpha in pi_w.coeffs:
        assert abs(pi_w.coeffs[alpha] - pi_u.coeffs[alpha] - pi_v.coeffs[alpha]) < 1e-8


def test_exponential_scale_rules():
    u = lin_combine([
        (3.0, make_field("power", 3, t=0.0)),
        (1.0, make_field("gaussian", 3)),
    ])
    pi = construct_pi(u, 1, -1.0, 2, scale=Scale.EXPONENTIAL)
    assert abs(pi.coeffs[(0, 0, 0)] - 3.0) < 1e-10
    assert pi.provenance[(0, 0, 0)] == "limit"

    pi_pos = construct_pi(u, 1, 1.0, 2, scale=Scale.EXPONENTIAL)
    assert pi_pos.provenance[(0, 0, 0)].startswith("ball")

    from growthlab.errors import SZero

    with pytest.raises(SZero):
        construct_pi(u, 1, 0.0, 2, scale=Scale.EXPONENTIAL)


def test_construct_pi_errors():
    u = make_field("gaussian", 3)
    with pytest.raises(ExcludedS):
        construct_pi(u, 1, -1.0, 2)
    line = make_field("gaussian", 1)
    with pytest.raises(DimensionOne):
        construct_pi(line, 1, -2.0, 2)


def test_partial_construction_lowest_degree():
    u = lin_combine([
        (1.0, make_field("coord_poly", 3, alpha=(1, 0, 0))),
        (1.0, make_field("gaussian", 3)),
    ])
    pi = construct_pi(u, 2, -3.5, 2, lowest_degree=1)
    assert all(sum(alpha) >= 1 for alpha in pi.coeffs)
    assert abs(pi.coeffs[(1, 0, 0)] - 1.0) < 1e-6


def test_poly_membership():
    one = MultiIndexPolynomial(3, {(0, 0, 0): 1.0})
    assert poly_membership(one, -0.5, 1) is True
    x1 = MultiIndexPolynomial(3, {(1, 0, 0): 1.0})
    assert poly_membership(x1, -2.5, 3) is False
    zero = MultiIndexPolynomial.zero(3)
    for s, k in [(-0.5, 1), (-2.5, 3), (4.0, 2)]:
        assert poly_membership(zero, s, k) is True
    with pytest.raises(ExcludedS):
        poly_membership(one, -1.0, 1)


def test_formal_derivative_matches_field():
    pi = MultiIndexPolynomial(2, {(2, 1): 3.0, (0, 1): -1.0, (0, 0): 4.0})
    d = pi.derivative((1, 1))
    pts = np.array([[0.5, -1.0], [2.0, 3.0]])
    assert np.allclose(d.evaluate(pts), 6.0 * pts[:, 0])
    assert np.allclose(
        pi.as_field().derivative((1, 1), pts), d.evaluate(pts)
    )


def test_json_round_trip():
    pi = MultiIndexPolynomial(
        2, {(1, 0): 2.5, (0, 0): -1.0}, provenance={(1, 0): "limit", (0, 0): "ball(0,1)"}
    )
    data = pi.to_json_dict()
    assert data["N"] == 2
    back = MultiIndexPolynomial.from_json_dict(data)
    assert back.coeffs == pi.coeffs
    assert back.provenance[(1, 0)] == "limit"
    # stable key order
    assert [e["alpha"] for e in data["coeffs"]] == sorted([e["alpha"] for e in data["coeffs"]])


def test_degree_and_zero():
    pi = MultiIndexPolynomial(2, {(1, 1): 1e-14, (0, 0): 0.5})
    assert pi.degree() == 2
    assert pi.degree(tol=1e-10) == 0
    assert MultiIndexPolynomial.zero(2).degree() == -1
