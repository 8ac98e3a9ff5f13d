from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from growthlab.exponents import (
    AdmissibleInterval,
    Exponent,
    Regime,
    admissible_interval,
    holder_conjugate,
    interval_composition_check,
    regime,
    sobolev_exponent,
    tensor_dim,
)

P_GRID = [Fraction(1), Fraction(5, 4), Fraction(3, 2), Fraction(2), Fraction(3), Fraction(5)]


def test_tensor_dim_values():
    assert tensor_dim(0, 4) == 1
    for n in range(1, 6):
        assert tensor_dim(1, n) == n
    assert tensor_dim(2, 3) == 6
    assert tensor_dim(3, 2) == 4


def test_sobolev_exponent_values():
    assert sobolev_exponent(2, 1, 3) == Exponent(6)
    assert sobolev_exponent(3, 1, 3).is_inf
    assert sobolev_exponent(1, 2, 5) == Exponent(Fraction(5, 3))


def test_admissible_interval_cases():
    i = admissible_interval(1, 2, 3)
    assert i.lower == Exponent(2) and i.upper == Exponent(6) and i.upper_closed

    crit = admissible_interval(1, 2, 2)
    assert crit.upper.is_inf and not crit.upper_closed

    line = admissible_interval(1, 1, 1)
    assert line.upper.is_inf and line.upper_closed


def _reference_interval(j: int, p: Fraction, n: int) -> AdmissibleInterval:
    # independent case split straight from the defining table
    if p * j < n:
        upper = Exponent(Fraction(n * p, n - j * p))
    else:
        upper = Exponent.inf()
    critical = p * j == n and not (n == 1 and j == 1 and p == 1)
    return AdmissibleInterval(Exponent(p), Exponent.inf() if critical else upper,
                              upper_closed=not critical)


@pytest.mark.parametrize("j", [1, 2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_interval_table_exhaustive(j, n):
    for p in P_GRID:
        got = admissible_interval(j, p, n)
        want = _reference_interval(j, p, n)
        assert got == want, (j, p, n)


def test_interval_on_line_ignores_order():
    for j in (1, 2, 3):
        for p in P_GRID:
            i = admissible_interval(j, p, 1)
            assert i.upper.is_inf and i.upper_closed


def _dense_rationals(lo: Fraction, hi: Fraction, count: int = 24):
    return [lo + (hi - lo) * Fraction(i, count) for i in range(count + 1)]


@pytest.mark.parametrize("j,n", [(2, 3), (2, 5), (3, 4), (4, 2), (2, 1)])
def test_composition_matches_dense_union_oracle(j, n):
    for p in P_GRID:
        assert interval_composition_check(j, p, n)
        target = admissible_interval(j, p, n)
        first = admissible_interval(1, p, n)
        p1_hi = Fraction(20) if first.upper.is_inf else first.upper.fraction
        p1s = [x for x in _dense_rationals(p, p1_hi) if first.contains(Exponent(x))]
        # sample q on both sides of every target endpoint
        q_hi = Fraction(30) if target.upper.is_inf else target.upper.fraction + 2
        for q in _dense_rationals(p, q_hi, 30):
            in_union = any(
                admissible_interval(j - 1, p1, n).contains(Exponent(q)) for p1 in p1s
            )
            assert in_union == target.contains(Exponent(q)), (p, q)


def test_composition_grid_regression():
    for j in (2, 3, 4):
        for p in P_GRID:
            for n in range(1, 6):
                assert interval_composition_check(j, p, n)


def test_regime_examples():
    r = regime(0.5, 3)
    assert r.component is Regime.ABOVE_MINUS_ONE and r.k_s == 3

    r = regime(-1.5, 3)
    assert r.component is Regime.BAND and r.k_s == 2 and r.band_index == 1

    assert regime(-2.0, 3).component is Regime.EXCLUDED
    assert regime(-3.0, 3).component is Regime.EXCLUDED
    assert regime(-3.5, 3).component is Regime.BELOW_MINUS_K
    assert regime(-3.5, 3).k_s == 0


def test_regime_threshold_monotone():
    k = 4
    previous = None
    for s in [2.0, -0.5, -1.2, -1.9, -2.5, -3.3, -3.9, -4.5, -9.0]:
        info = regime(s, k)
        assert info.component is not Regime.EXCLUDED
        assert 0 <= info.k_s <= k
        if previous is not None:
            assert info.k_s <= previous
        previous = info.k_s


@given(
    p=st.fractions(min_value=1, max_value=8),
    j=st.integers(min_value=1, max_value=4),
    n=st.integers(min_value=1, max_value=6),
)
def test_lower_endpoint_always_inside(p, j, n):
    assert admissible_interval(j, p, n).contains(Exponent(p))


@given(
    p=st.fractions(min_value=1, max_value=8),
    q=st.fractions(min_value=1, max_value=8),
    j=st.integers(min_value=1, max_value=3),
    n=st.integers(min_value=1, max_value=5),
)
def test_conjugate_monotone(p, q, j, n):
    lo, hi = sorted([p, q])
    assert sobolev_exponent(lo, j, n) <= sobolev_exponent(hi, j, n)
    if j < 3:
        assert sobolev_exponent(p, j, n) <= sobolev_exponent(p, j + 1, n)


def test_exponent_basics():
    assert Exponent("3/2") == Exponent(Fraction(3, 2))
    assert Exponent("inf").is_inf
    assert Exponent(2) < Exponent.inf()
    assert float(Exponent.inf()) == float("inf")
    assert repr(Exponent(Fraction(5, 3))) == "5/3"
    with pytest.raises(ValueError):
        Exponent(Fraction(1, 2))


def test_holder_conjugate():
    assert holder_conjugate(1).is_inf
    assert holder_conjugate(2) == Exponent(2)
    assert holder_conjugate(4) == Exponent(Fraction(4, 3))
    assert holder_conjugate(Exponent.inf()) == Exponent(1)
