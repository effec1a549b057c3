import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from normord.errors import TruncationBudgetExceeded
from normord.expr import taylor
from normord.series import Polynomial, Series
from normord.verify import stirling2
from normord.weyl import (
    CoherentParams,
    NormalOrderedForm,
    bargmann_moment,
    bargmann_moments,
    bargmann_moments_series,
    central_identity_check,
    flow_polynomials,
    normal_order_exp,
    weyl_table,
)

X = Polynomial([0, 1])
ZERO = Polynomial([0])
ONE = Polynomial([1])
BELL = [1, 1, 2, 5, 15, 52, 203, 877]


def test_xd_squared():
    table = weyl_table(X, ZERO, 2)
    assert table.f_nk(2, 1) == X
    assert table.f_nk(2, 2) == X * X
    assert table.h[2] == ZERO


def test_d_plus_x_squared():
    table = weyl_table(ONE, X, 2)
    assert table.h[2] == Polynomial([1, 0, 1])
    assert table.f_nk(2, 1) == Polynomial([0, 2])
    assert table.f_nk(2, 2) == ONE


def test_row_zero():
    table = weyl_table(Polynomial([3, 1]), Polynomial([0, 0, 2]), 0)
    assert table.h[0] == ONE and table.f[0] == ()


def test_stirling_triangle():
    s = stirling2(8)
    table = weyl_table(X, ZERO, 8)
    for n in range(9):
        for k in range(1, n + 1):
            assert table.f_nk(n, k) == Polynomial.monomial(k, s[n][k])
        if n:
            assert table.h[n] == ZERO


def test_q_zero_gives_powers_of_v():
    v = Polynomial([1, -2, 1])
    table = weyl_table(ZERO, v, 5)
    for n in range(6):
        assert table.h[n] == v ** n
        assert all(p.is_zero() for p in table.f[n])


def test_bargmann_examples():
    z = Polynomial([0, 1], "z")
    assert bargmann_moment(X, ZERO, CoherentParams(1), 2) == z + z * z
    assert bargmann_moment(Polynomial([2, 3]), X, CoherentParams(1, 5), 0) == 1
    assert bargmann_moments(X, ZERO, CoherentParams(1, 1), 7) == BELL


def test_bargmann_series_variant_agrees():
    q, v = Polynomial([1, -1, 2]), Polynomial([0, 3])
    qs, vs = q.to_series(1, 8, "x-1"), v.to_series(1, 8, "x-1")
    assert bargmann_moments_series(qs, vs, 8) == bargmann_moments(q, v, CoherentParams(1), 8)
    assert bargmann_moments_series(qs, vs, 8, 2) == bargmann_moments(q, v, CoherentParams(1, 2), 8)


def test_bargmann_budget_guard():
    with pytest.raises(TruncationBudgetExceeded):
        bargmann_moments(X ** 3, ZERO, CoherentParams(1), 8, cap=4)


@pytest.mark.parametrize(
    "q, v, x0",
    [(X, ZERO, 1), (ONE, ZERO, Fraction(7, 3)), (X * X, ZERO, 1), (ONE, X, 0), (Polynomial([1, 1, 1]), X * X, -1)],
)
def test_central_identity(q, v, x0):
    report = central_identity_check(q, v, x0, 8)
    assert report.passed, report.mismatch


def test_pure_shift_gives_monomials():
    polys = flow_polynomials(ONE, ZERO, Fraction(5, 2), 6)
    assert polys == [Polynomial.monomial(n, 1, "z") for n in range(7)]


small = st.lists(st.integers(-3, 3), min_size=1, max_size=4).map(Polynomial)


@settings(max_examples=15, deadline=None)
@given(small, small, st.integers(-2, 2))
def test_three_way_agreement(q, v, x0):
    assert central_identity_check(q, v, x0, 6).passed


def test_normal_order_forests_closed_form():
    form = normal_order_exp("x^2", "0", 1, 6)
    assert form.closed_form == ":exp((ad/(1 - L*ad) - ad)*a):"
    form = normal_order_exp("x^3", "0", 1, 6)
    assert form.closed_form == ":exp((ad/(1 - L*2*ad^2)^(1/2) - ad)*a):"


def test_normal_order_arrangements_closed_form():
    form = normal_order_exp("1", "1/(2-x)", 1, 6)
    assert form.closed_form == ":(2 - ad)/(2 - ad - L) * exp((L)*a):"


def test_normal_order_bessel_agrees_with_printed_form_at_one():
    # at ad = 1 the printed shift 1 - sqrt((2 - ad) - 2L) is 1 - sqrt(1 - 2L)
    form = normal_order_exp("1/(2-x)", "0", 1, 8)
    at_one = form.shift.map(lambda c: c.coeffs[0])
    assert at_one == taylor("1 - sqrt(1 - 2*L)", 0, 8, var="L")
    assert form.closed_form == ":exp(((2 - ad)*(1 - sqrt(1 - 2*L/(2 - ad)^2)))*a):"


def test_printed_bessel_shift_is_not_an_operator_identity():
    # at ad = -2 the printed shift 1 - sqrt((2 - ad) - 2L) = 1 - 2 sqrt(1 - L/2)
    # is -1 at L = 0, while any shift T - ad must vanish there
    printed = taylor("1 - 2*sqrt(1 - L/2)", 0, 4, var="L")
    assert printed.coeffs[0] == -1
    corrected = taylor("(2 - (-2))*(1 - sqrt(1 - 2*L/(2 - (-2))^2))", 0, 4, var="L")
    assert corrected.coeffs[0] == 0
    assert corrected.coeffs[1] == Fraction(1, 4)  # q(-2) = 1/4


def test_normal_order_order_zero():
    form = normal_order_exp("x^2", "x", 1, 0)
    assert form.prefunction.coeffs[0] == Series.constant(1, 0, "x-1")
    assert form.shift.coeffs[0].is_zero()


def test_normal_order_truncated_display_and_json_round_trip():
    form = normal_order_exp("x*(1+log(x))", "0", 1, 3)
    assert form.display.startswith(":(1 + O(L^4)) * exp(((1 + 2*(ad-1)")
    data = json.loads(json.dumps(form.to_json()))
    back = NormalOrderedForm.from_json(data, 1)
    assert back.prefunction == form.prefunction and back.shift == form.shift
    assert back.display == form.display


def test_weyl_json():
    data = weyl_table(X, ZERO, 2).to_json()
    assert data["rows"][2]["f"] == {"1": "x", "2": "x^2"}
