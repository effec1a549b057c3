from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from normord import catalog as shipped
from normord.errors import InsufficientInputOrder, PreconditionError, UnsupportedParameters
from normord.expr import taylor
from normord.flow import (
    closed_form_catalog,
    group_law_check,
    residuals,
    solve_flow,
    solve_flow_bivariate,
    solve_flow_expr,
)
from normord.series import Polynomial, Series, exp

L = "L"


def lam(coeffs, order):
    return Series(coeffs, order, L)


def test_euler_dilation_at_two():
    sol = solve_flow_expr("x", "0", 2, 3)
    assert sol.T == lam([2, 2, 1, Fraction(1, 3)], 3)
    assert sol.g == lam([1], 3)


def test_stationary_flow():
    sol = solve_flow_expr("0", "0", 5, 4)
    assert sol.T == lam([5], 4)
    assert sol.g == lam([1], 4)


def test_ex4_prefunction():
    sol = solve_flow_expr("x", "x^2", 1, 8)
    assert sol.g.coeffs[:3] == (1, 1, Fraction(3, 2))
    e2 = exp(2 * Series.variable(8, L))
    assert sol.g == exp((e2 - 1) / 2)


def test_order_zero():
    sol = solve_flow_expr("x", "0", 1, 0)
    assert sol.T == lam([1], 0) and sol.g == lam([1], 0)


def test_insufficient_input_order():
    q = Series([1, 1], 1, "x")
    with pytest.raises(InsufficientInputOrder):
        solve_flow(q, q, 0, 4)
    assert solve_flow(q, q, 0, 2).order == 2


def inner_order(n, k):
    # the L^k coefficient uses k - 1 derivatives of q and v
    return n if k == 0 else n - k + 1


def test_bivariate_inner_orders():
    sol = solve_flow_bivariate("x^2", "x", 0, 6)
    assert [c.order for c in sol.T.coeffs] == [inner_order(6, k) for k in range(7)]
    assert [c.order for c in sol.g.coeffs] == [inner_order(6, k) for k in range(7)]


def test_bivariate_pure_shift():
    sol = solve_flow_bivariate("1", "0", 0, 4)
    one = Series.constant(1, 4, "x")
    assert sol.T.coeffs[1] == one
    assert all(c.is_zero() for c in sol.T.coeffs[2:])
    assert all(c.is_zero() for c in sol.g.coeffs[1:])


def test_bivariate_x_squared():
    # T = x / (1 - L x): the L^k coefficient is x^(k+1)
    n = 6
    sol = solve_flow_bivariate("x^2", "0", 0, n)
    for k in range(n + 1):
        expected = Polynomial.monomial(k + 1).to_series(0, inner_order(n, k), "x")
        assert sol.T.coeffs[k] == expected


def test_bivariate_v_only():
    n = 5
    sol = solve_flow_bivariate("0", "1 + x", 0, n)
    vx = Series([1, 1], n, "x")
    power = Series.constant(1, n, "x")
    fact = 1
    for k in range(n + 1):
        assert sol.g.coeffs[k] == (power * Fraction(1, fact)).truncate(inner_order(n, k))
        power = power * vx
        fact *= k + 1


def test_bivariate_order_limit():
    with pytest.raises(UnsupportedParameters):
        solve_flow_bivariate("x", "0", 0, 5, 3)


def test_bivariate_at_point_matches_pointwise():
    for q, v, x0 in (("x^2", "x", 1), ("1/(2-x)", "x", 1), ("x*(1+log(x))", "0", 1), ("1 - x^3", "2", -1)):
        biv = solve_flow_bivariate(q, v, x0, 6)
        point = solve_flow_expr(q, v, x0, 6)
        assert biv.at_point().T == point.T and biv.at_point().g == point.g


@pytest.mark.parametrize("q, v", [("x", "0"), ("x", "x^2"), ("0", "0"), ("x^2", "x^3"), ("1/(2-x)", "x")])
def test_group_law(q, v):
    report = group_law_check(solve_flow_bivariate(q, v, 1, 7))
    assert report.passed, report.mismatches


def test_group_law_catches_a_broken_solution():
    sol = solve_flow_bivariate("x", "x", 1, 5)
    coeffs = list(sol.g.coeffs)
    coeffs[3] = coeffs[3] + 1
    broken = type(sol)(sol.T, Series(coeffs, sol.g.order, L), sol.x0, sol.q_series, sol.v_series)
    report = group_law_check(broken)
    assert report.T_holds and not report.g_holds


def test_group_law_needs_bivariate():
    with pytest.raises(PreconditionError):
        group_law_check(solve_flow_expr("x", "0", 1, 3))


def test_catalog_examples():
    assert closed_form_catalog("ex2", 1, 6, r=2).T == lam([1] * 7, 6)
    assert closed_form_catalog("ex3", 1, 6).g == lam([1] * 7, 6)


@pytest.mark.parametrize(
    "name, params",
    [("ex1", {}), ("ex2", {"r": 2}), ("ex2", {"r": 4}), ("ex3", {}), ("ex3", {"v": "x^2 - 3"}),
     ("ex4", {}), ("ex5", {"r": 2, "s": 2}), ("ex5", {"r": 3, "s": 5}), ("ex5", {"r": 4, "s": 0})],
)
@pytest.mark.parametrize("x0", [1, 3, Fraction(1, 2)])
def test_closed_forms_match_solver(name, params, x0):
    ref = closed_form_catalog(name, x0, 8, **params)
    sol = solve_flow(ref.q_series, ref.v_series, x0, 8)
    assert sol.T == ref.T
    assert sol.g == ref.g


def test_printed_ex5_prefunction_only_matches_at_s_zero():
    entry = shipped.flow_entry("ex5")
    for s, agrees in ((0, True), (2, False), (4, False)):
        p = shipped.resolve_params(entry, r=2, s=s)
        printed = taylor(shipped.fill(entry["g_as_printed"], 1, **p), 0, 6, var=L)
        sol = solve_flow_expr(shipped.fill(entry["q"], **p), shipped.fill(entry["v"], **p), 1, 6)
        assert (printed == sol.g) is agrees


def test_unsupported_parameters():
    with pytest.raises(UnsupportedParameters):
        closed_form_catalog("ex2", 1, 4, r=1)
    with pytest.raises(UnsupportedParameters):
        closed_form_catalog("ex5", 1, 4, r=3, s=2)
    with pytest.raises(UnsupportedParameters):
        closed_form_catalog("ex9", 1, 4)


small_polys = st.lists(st.integers(-3, 3), min_size=1, max_size=4).map(Polynomial)


@settings(max_examples=25, deadline=None)
@given(small_polys, small_polys, st.integers(-2, 2))
def test_residuals_vanish(q, v, x0):
    sol = solve_flow_expr(q.to_expr(), v.to_expr(), x0, 7)
    rq, rv = residuals(sol)
    assert rq.is_zero() and rv.is_zero()


@settings(max_examples=10, deadline=None)
@given(small_polys, small_polys)
def test_group_law_random(q, v):
    assert group_law_check(solve_flow_bivariate(q.to_expr(), v.to_expr(), 1, 5)).passed


def test_json_shape():
    data = solve_flow_expr("x", "0", Fraction(1, 2), 2).to_json()
    assert data["x0"] == ["1", "2"]
    assert Series.from_json(data["T"]) == lam([Fraction(1, 2), Fraction(1, 2), Fraction(1, 4)], 2)
