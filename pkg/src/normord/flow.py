"""Substitution flows: ``exp(L (q(x) d/dx + v(x))) F(x) = g(L, x) F(T(L, x))``.

``T`` and ``g`` solve

    dT/dL = q(T),      T(0, x) = x
    dg/dL = v(T) g,    g(0, x) = 1

and are computed here as exact power series in ``L`` by integrating the
equations one order at a time.  In pointwise mode the coefficients are
rationals (everything evaluated at ``x = x0``); in bivariate mode they are
series in ``x - x0`` under the total-degree convention of
:mod:`normord.series`.

The group law ``T(L+s, x) = T(s, T(L, x))`` only holds locally for actual
functions, but on formal series it is an exact order-by-order identity, so
:func:`group_law_check` tests equality rather than closeness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import catalog as _catalog
from .errors import InsufficientInputOrder, PreconditionError, UnsupportedParameters
from .expr import canonical, taylor, to_string
from .series import (
    DEFAULT_ORDER,
    Series,
    as_fraction,
    compose,
    differentiate,
    exp,
    integrate,
)

LAMBDA = "L"


def x_tag(x0) -> str:
    x0 = Fraction(x0)
    return "x" if x0 == 0 else f"x-{x0}"


@dataclass(frozen=True)
class FlowSolution:
    T: Series
    g: Series
    x0: Fraction
    q_series: Series
    v_series: Series
    q_expr: str | None = None
    v_expr: str | None = None

    @property
    def bivariate(self) -> bool:
        return self.T.nested

    @property
    def order(self) -> int:
        return self.T.order

    def shift(self) -> Series:
        """``T - x``: in pointwise mode this is ``T(L, x0) - x0``."""
        shifted = self.T - self.x0
        if self.bivariate:
            u = shifted.coeffs[0]
            return Series([u - u] + list(shifted.coeffs[1:]), shifted.order, shifted.var)
        return shifted

    def at_point(self) -> "FlowSolution":
        """Bivariate solution evaluated at ``x = x0``."""
        if not self.bivariate:
            return self
        return FlowSolution(
            self.T.map(lambda c: c.coeffs[0]),
            self.g.map(lambda c: c.coeffs[0]),
            self.x0,
            self.q_series,
            self.v_series,
            self.q_expr,
            self.v_expr,
        )

    def to_json(self) -> dict:
        return {
            "x0": [str(self.x0.numerator), str(self.x0.denominator)],
            "q": self.q_expr,
            "v": self.v_expr,
            "T": self.T.to_json(),
            "g": self.g.to_json(),
        }


def _integrate_flow(q: Series, v: Series, start, one, order: int):
    """Order-by-order integration shared by both modes.

    ``start`` is the ``L^0`` coefficient of ``T - x0`` (0, or the inner
    variable); ``one`` the unit of the coefficient ring.
    """
    shift = [start]
    g = [one]
    for k in range(order):
        b = Series(shift, k, LAMBDA)
        gk = Series(g, k, LAMBDA)
        shift.append(compose(q, b).coeffs[k] / (k + 1))
        g.append((compose(v, b) * gk).coeffs[k] / (k + 1))
    return shift, g


def _check_input_order(q: Series, v: Series, order: int):
    need = order - 1
    for name, s in (("q", q), ("v", v)):
        if s.order < need:
            raise InsufficientInputOrder(
                f"{name} is known to order {s.order}; solving to order {order} needs {need}"
            )


def solve_flow(q: Series, v: Series, x0=0, order: int = DEFAULT_ORDER, q_expr=None, v_expr=None) -> FlowSolution:
    """Pointwise solution at ``x = x0`` from the Taylor series of q and v there."""
    x0 = as_fraction(x0)
    _check_input_order(q, v, order)
    shift, g = _integrate_flow(q, v, Fraction(0), Fraction(1), order)
    T = Series([x0] + shift[1:], order, LAMBDA)
    return FlowSolution(T, Series(g, order, LAMBDA), x0, q, v, q_expr, v_expr)


def _expr_text(e) -> str:
    return e if isinstance(e, str) else to_string(e)


def solve_flow_expr(q, v, x0=0, order: int = DEFAULT_ORDER) -> FlowSolution:
    """Pointwise solution from expressions (strings or ASTs)."""
    x0 = as_fraction(x0)
    tag = x_tag(x0)
    qs = taylor(q, x0, max(order, 0), var=tag)
    vs = taylor(v, x0, max(order, 0), var=tag)
    return solve_flow(qs, vs, x0, order, _expr_text(q), _expr_text(v))


def solve_flow_bivariate(q, v, x0=0, order_lambda: int = DEFAULT_ORDER, order_x: int | None = None) -> FlowSolution:
    """Solution as a series in L whose coefficients are series in ``x - x0``.

    ``q`` and ``v`` are expressions, or Series already expanded about x0 to
    order ``order_x``.  The coefficient of ``L^i`` is exact to ``(x-x0)``
    order ``order_x - i``.
    """
    x0 = as_fraction(x0)
    if order_x is None:
        order_x = order_lambda
    if order_lambda > order_x:
        raise UnsupportedParameters("the L-order cannot exceed the x-order in bivariate mode")
    tag = x_tag(x0)
    q_expr = v_expr = None
    if isinstance(q, Series):
        qs = q
    else:
        q_expr, qs = _expr_text(q), taylor(q, x0, order_x, var=tag)
    if isinstance(v, Series):
        vs = v
    else:
        v_expr, vs = _expr_text(v), taylor(v, x0, order_x, var=tag)
    for name, s in (("q", qs), ("v", vs)):
        if s.order < order_x:
            raise InsufficientInputOrder(f"{name} is known to order {s.order}, need {order_x}")
    qs, vs = qs.truncate(order_x), vs.truncate(order_x)
    u = Series.variable(order_x, tag)
    one = Series.constant(1, order_x, tag)
    shift, g = _integrate_flow(qs, vs, u, one, order_lambda)
    T = Series([shift[0] + x0] + shift[1:], order_lambda, LAMBDA)
    return FlowSolution(T, Series(g, order_lambda, LAMBDA), x0, qs, vs, q_expr, v_expr)


@dataclass
class GroupLawReport:
    order_checked: int
    T_holds: bool
    g_holds: bool
    mismatches: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.T_holds and self.g_holds

    def to_json(self) -> dict:
        return {
            "order_checked": self.order_checked,
            "T": self.T_holds,
            "g": self.g_holds,
            "passed": self.passed,
            "mismatches": self.mismatches,
        }


def _same(a: Series, b: Series) -> bool:
    n = min(a.order, b.order)
    return a.truncate(n) == b.truncate(n)


def group_law_check(sol: FlowSolution, order: int | None = None) -> GroupLawReport:
    """Compare both sides of the group law on every ``L^i s^j``, ``i + j <= order``.

    Each coefficient is a series in ``x - x0``; the ``T(L, x)`` substitution
    into the x slot goes through :func:`compose`.
    """
    if not sol.bivariate:
        raise PreconditionError("the group law needs a bivariate flow solution")
    n = sol.order if order is None else min(order, sol.order)
    Tc, gc = sol.T.coeffs, sol.g.coeffs
    U = sol.T - sol.x0
    T_ok = g_ok = True
    mismatches = []
    for j in range(n + 1):
        m = n - j
        Uj = U.truncate(m)
        t_rhs = compose(Tc[j], Uj)
        g_rhs = sol.g.truncate(m) * compose(gc[j], Uj)
        for i in range(m + 1):
            binom = comb(i + j, j)
            if not _same(Tc[i + j] * binom, t_rhs.coeffs[i]):
                T_ok = False
                mismatches.append(f"T: L^{i} s^{j}")
            if not _same(gc[i + j] * binom, g_rhs.coeffs[i]):
                g_ok = False
                mismatches.append(f"g: L^{i} s^{j}")
    return GroupLawReport(n, T_ok, g_ok, mismatches)


def closed_form_catalog(name: str, x0=1, order: int = DEFAULT_ORDER, **params) -> FlowSolution:
    """Closed-form T and g of a worked example, expanded in L at ``x = x0``.

    ``name`` is one of ``ex1`` .. ``ex5``; ``ex2`` takes ``r``, ``ex3`` takes
    ``v`` (an expression), ``ex5`` takes ``r`` and ``s``.
    """
    entry = _catalog.flow_entry(name)
    x0 = as_fraction(x0)
    p = _catalog.resolve_params(entry, **params)
    q_text = _catalog.fill(entry["q"], **p)
    v_text = _catalog.fill(entry["v"], **p)
    tag = x_tag(x0)
    qs = taylor(q_text, x0, order, var=tag)
    vs = taylor(v_text, x0, order, var=tag)
    T = taylor(_catalog.fill(entry["T"], x0, **p), 0, order, var=LAMBDA)
    if entry["g"] == "@exp-integral-v":
        # g = exp(integral_0^L v(x0 + u) du)
        g = exp(integrate(vs).with_var(LAMBDA)).truncate(order)
    else:
        g = taylor(_catalog.fill(entry["g"], x0, **p), 0, order, var=LAMBDA)
    return FlowSolution(T, g, x0, qs, vs, canonical(q_text), canonical(v_text))


def catalog_expressions(name: str, **params) -> tuple[str, str]:
    entry = _catalog.flow_entry(name)
    p = _catalog.resolve_params(entry, **params)
    return _catalog.fill(entry["q"], **p), _catalog.fill(entry["v"], **p)


def residuals(sol: FlowSolution) -> tuple[Series, Series]:
    """``dT/dL - q(T)`` and ``dg/dL - v(T) g``, both zero for a true solution."""
    n = sol.order - 1
    b = (sol.T - sol.x0).truncate(n)
    rq = differentiate(sol.T) - compose(sol.q_series, b)
    rv = differentiate(sol.g) - compose(sol.v_series, b) * sol.g.truncate(n)
    return rq, rv


__all__ = [
    "FlowSolution",
    "GroupLawReport",
    "LAMBDA",
    "catalog_expressions",
    "closed_form_catalog",
    "group_law_check",
    "residuals",
    "solve_flow",
    "solve_flow_bivariate",
    "solve_flow_expr",
    "x_tag",
]
