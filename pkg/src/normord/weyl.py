"""Normal ordering of ``W = q(ad) a + v(ad)`` and its exponential.

Three independent routes to the coherent-state polynomials
``S_n(z) = <z'|W^n|z> / <z'|z>``:

* :func:`weyl_table` expands ``W^n = h_n(ad) + sum_k f_{n,k}(ad) a^k`` by the
  operator recurrence, in the representation ``ad -> x``, ``a -> d/dx``;
* the flow route reads ``n! [L^n] g(L, z') exp(z (T(L, z') - z'))``;
* :func:`bargmann_moments` applies ``q(x) d/dx + v(x)`` to a truncated
  ``exp(z x)`` and pairs the result with ``<z'|``.

Here ``ad`` is the creation operator and ``a`` the annihilation operator.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import catalog as _catalog
from .errors import InsufficientInputOrder, PreconditionError, TruncationBudgetExceeded, VerificationFailure
from .expr import canonical, taylor, to_string
from .flow import LAMBDA, solve_flow, solve_flow_bivariate, x_tag
from .series import Polynomial, Series, as_fraction, render_series

ORACLE_CAP = 256
ORACLE_GUARD = 4


@dataclass(frozen=True)
class WeylTable:
    q: Polynomial
    v: Polynomial
    h: tuple
    f: tuple  # f[n][k - 1] holds f_{n,k}

    @property
    def n_max(self) -> int:
        return len(self.h) - 1

    def f_nk(self, n: int, k: int) -> Polynomial:
        if k < 1 or k > n:
            return Polynomial((), self.q.var)
        return self.f[n][k - 1]

    def evaluate(self, n: int, x0, z_var: str = "z") -> Polynomial:
        """``h_n(x0) + sum_k f_{n,k}(x0) z^k`` as a polynomial in z."""
        x0 = as_fraction(x0)
        return Polynomial([self.h[n](x0)] + [p(x0) for p in self.f[n]], z_var)

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "v": str(self.v),
            "rows": [
                {
                    "n": n,
                    "h": str(self.h[n]),
                    "f": {str(k + 1): str(p) for k, p in enumerate(self.f[n])},
                }
                for n in range(self.n_max + 1)
            ],
        }


def weyl_table(q: Polynomial, v: Polynomial, n_max: int) -> WeylTable:
    """Rows 0..n_max of ``(q D + v)^n = h_n + sum_{k=1}^n f_{n,k} D^k``.

    One more factor of ``q D + v`` on the left gives
    ``f_{n+1,k} = q f'_{n,k} + q f_{n,k-1} + v f_{n,k}`` with ``f_{n,0} = h_n``.
    """
    var = q.var
    zero = Polynomial((), var)
    rows = [[Polynomial([1], var)]]
    for n in range(n_max):
        prev = rows[-1]
        nxt = []
        for k in range(n + 2):
            cur = prev[k] if k <= n else zero
            below = prev[k - 1] if k >= 1 else zero
            nxt.append(q * cur.derivative() + q * below + v * cur)
        rows.append(nxt)
    return WeylTable(q, v, tuple(r[0] for r in rows), tuple(tuple(r[1:]) for r in rows))


def egf_polynomials(A: Series, B: Series, n_max: int, z_var: str = "z") -> list[Polynomial]:
    """``S_n(z) = n! [L^n] A(L) exp(z B(L))`` for n = 0..n_max."""
    if B.coeffs[0] != 0:
        raise PreconditionError("B must vanish at L = 0")
    if min(A.order, B.order) < n_max:
        raise InsufficientInputOrder(f"A and B must be known to order {n_max}")
    A = A.truncate(n_max)
    B = B.truncate(n_max)
    table = [[Fraction(0)] * (n_max + 1) for _ in range(n_max + 1)]
    term = A
    for k in range(n_max + 1):
        for n in range(k, n_max + 1):
            table[n][k] = term.coeffs[n] * factorial(n) / factorial(k)
        term = term * B
    return [Polynomial(table[n][: n + 1], z_var) for n in range(n_max + 1)]


@dataclass(frozen=True)
class CoherentParams:
    """``z_prime_star`` is the fixed bra parameter; ``z=None`` keeps z symbolic."""

    z_prime_star: Fraction = Fraction(1)
    z: Fraction | None = None


def _apply(state: dict, q_coeffs, v_coeffs, max_x: int | None = None) -> dict:
    """Apply ``q(x) d/dx + v(x)`` to ``sum c_{ij} x^i z^j``."""
    out: dict = {}
    for (i, j), c in state.items():
        if i:
            dc = i * c
            for a, qa in enumerate(q_coeffs):
                if qa:
                    key = (i - 1 + a, j)
                    out[key] = out.get(key, 0) + qa * dc
        for a, va in enumerate(v_coeffs):
            if va:
                key = (i + a, j)
                out[key] = out.get(key, 0) + va * c
    if max_x is not None:
        return {k: c for k, c in out.items() if c and k[0] <= max_x}
    return {k: c for k, c in out.items() if c}


def _finish(poly: Polynomial, params: CoherentParams):
    return poly if params.z is None else poly(as_fraction(params.z))


def bargmann_moments(q: Polynomial, v: Polynomial, params: CoherentParams, n_max: int, cap: int = ORACLE_CAP):
    """``<z'|W^n|z> / <z'|z>`` for n = 0..n_max, polynomial q and v.

    ``|z>`` becomes ``sum_{m<=M} (z x)^m / m!`` in the Bargmann picture; W acts
    as ``q(x) d/dx + v(x)``, the bra pairs ``x^m`` with ``z'^m`` and the
    overlap ``exp(z z')`` is divided out.  W never touches the z-degree, so
    the truncation is exact once ``M >= n``.
    """
    deg = max(q.degree, v.degree, 0)
    M = n_max * (deg + 1) + ORACLE_GUARD
    if M > cap:
        raise TruncationBudgetExceeded(f"oracle needs {M} terms of exp(z x), cap is {cap}")
    zp = as_fraction(params.z_prime_star)
    state = {(m, m): Fraction(1, factorial(m)) for m in range(M + 1)}
    inverse_overlap = [(-zp) ** k / factorial(k) for k in range(M + 1)]
    zp_powers = [zp**i for i in range(M + n_max * deg + 2)]
    out = []
    for n in range(n_max + 1):
        if n:
            state = _apply(state, q.coeffs, v.coeffs)
        paired = [Fraction(0)] * (M + 1)
        for (i, j), c in state.items():
            paired[j] += c * zp_powers[i]
        coeffs = [
            sum((paired[a] * inverse_overlap[j - a] for a in range(j + 1)), Fraction(0))
            for j in range(M + 1)
        ]
        if any(coeffs[n + 1 :]):
            raise VerificationFailure(f"oracle produced z-degree above {n} at n = {n}")
        out.append(_finish(Polynomial(coeffs[: n + 1], "z"), params))
    return out


def bargmann_moment(q: Polynomial, v: Polynomial, params: CoherentParams, n: int, cap: int = ORACLE_CAP):
    return bargmann_moments(q, v, params, n, cap)[n]


def bargmann_moments_series(q: Series, v: Series, n_max: int, z=None):
    """Oracle for non-polynomial q, v given as Taylor series about ``z'``.

    Works in ``u = x - z'``: the pairing becomes evaluation at ``u = 0`` and the
    overlap factor is 1.  Terms of u-degree above the number of remaining
    applications can never reach ``u^0`` and are dropped, which also makes
    the q, v truncation harmless as long as they are known to order n_max - 1.
    """
    for name, s in (("q", q), ("v", v)):
        if s.order < n_max - 1:
            raise InsufficientInputOrder(f"{name} must be known to order {n_max - 1}")
    params = CoherentParams(Fraction(0), None if z is None else as_fraction(z))
    state = {(m, m): Fraction(1, factorial(m)) for m in range(n_max + 1)}
    out = []
    for n in range(n_max + 1):
        if n:
            state = _apply(state, q.coeffs, v.coeffs, max_x=n_max - n)
        coeffs = [Fraction(0)] * (n + 1)
        for (i, j), c in state.items():
            if i == 0:
                coeffs[j] += c
        out.append(_finish(Polynomial(coeffs, "z"), params))
    return out


@dataclass(frozen=True)
class NormalOrderedForm:
    """``N[exp(L W)] = :g(L, ad) exp((T(L, ad) - ad) a):``."""

    prefunction: Series
    shift: Series
    x0: Fraction
    display: str
    closed_form: str | None = None

    def to_json(self) -> dict:
        return {
            "prefunction": self.prefunction.to_json(),
            "shift": self.shift.to_json(),
            "display": self.display,
            "closed_form": self.closed_form,
        }

    @classmethod
    def from_json(cls, data: dict, x0=0) -> "NormalOrderedForm":
        return cls(
            Series.from_json(data["prefunction"]),
            Series.from_json(data["shift"]),
            as_fraction(x0),
            data["display"],
            data.get("closed_form"),
        )


def _ad_name(x0: Fraction) -> str:
    return "ad" if x0 == 0 else f"ad-{x0}"


def _render_operator(series: Series, x0: Fraction) -> str:
    if series.nested:
        name = _ad_name(x0)
        series = series.map(lambda c: c.with_var(name))
    return render_series(series)


def render_normal_form(prefunction: Series, shift: Series, x0: Fraction) -> str:
    pre = _render_operator(prefunction, x0)
    sh = _render_operator(shift, x0)
    return f":({pre}) * exp(({sh})*a):"


def _closed_form_candidates():
    data = _catalog.load()
    for entry in data["flows"].values():
        if entry["g"].startswith("@"):
            continue
        yield entry, entry["g"], f"{entry['T']} - {{x}}"
    for entry in data["sequences"].values():
        if "normal_order" in entry:
            yield entry, entry["normal_order"]["prefunction"], entry["normal_order"]["shift"]


def _param_grid(entry):
    names = set(entry.get("params", {}))
    if not names:
        yield {}
        return
    if names == {"r"}:
        for r in range(2, 10):
            yield {"r": r}
    elif names == {"r", "s"}:
        for r in range(2, 10):
            for s in range(0, 10):
                if s != r - 1:
                    yield {"r": r, "s": s}


def _tidy(text: str) -> str:
    """Drop unit factors and exponents left by filling a template with r = 2."""
    for old, new in (("^(1/1)", ""), ("*1*", "*"), ("^(1)", ""), ("/(1)", ""), ("(-(1))", "(-1)")):
        text = text.replace(old, new)
    return re.sub(r"\^1(?![0-9/])", "", text)


def find_closed_form(q_text: str, v_text: str, x0, pointwise_g: Series, pointwise_shift: Series) -> str | None:
    """A catalog closed form for this (q, v), checked against the series."""
    q_c, v_c = canonical(q_text), canonical(v_text)
    x0 = as_fraction(x0)
    order = pointwise_g.order
    for entry, pre_t, shift_t in _closed_form_candidates():
        for params in _param_grid(entry):
            p = _catalog.resolve_params(entry, **params)
            if "q" not in entry:
                continue
            if canonical(_catalog.fill(entry["q"], **p)) != q_c or canonical(_catalog.fill(entry["v"], **p)) != v_c:
                continue
            try:
                pre = taylor(_catalog.fill(pre_t, x0, **p), 0, order, var=LAMBDA)
                sh = taylor(_catalog.fill(shift_t, x0, **p), 0, order, var=LAMBDA)
            except PreconditionError:
                continue
            if pre != pointwise_g or sh != pointwise_shift:
                continue
            pre_d = _tidy(_catalog.fill(pre_t, "ad", **p))
            sh_d = _tidy(_catalog.fill(shift_t, "ad", **p))
            if pre_d.strip() == "1":
                return f":exp(({sh_d})*a):"
            return f":{pre_d} * exp(({sh_d})*a):"
    return None


def normal_order_exp(q, v, x0=0, order: int = 8, closed_forms: bool = True) -> NormalOrderedForm:
    """Normally ordered ``exp(L (q(ad) a + v(ad)))`` to order ``order`` in L.

    Coefficients are series in ``ad - x0``.  When the shipped catalog has a
    closed form for the same q, v that matches the computed series at x0, it
    is attached as ``closed_form``.
    """
    x0 = as_fraction(x0)
    sol = solve_flow_bivariate(q, v, x0, order)
    pre, shift = sol.g, sol.shift()
    display = render_normal_form(pre, shift, x0)
    closed = None
    if closed_forms:
        point = sol.at_point()
        q_text = q if isinstance(q, str) else to_string(q)
        v_text = v if isinstance(v, str) else to_string(v)
        closed = find_closed_form(q_text, v_text, x0, point.g, point.T - x0)
    return NormalOrderedForm(pre, shift, x0, display, closed)


@dataclass
class CentralIdentityReport:
    n_max: int
    passed: bool
    mismatch: tuple | None = None
    table: list | None = None
    flow: list | None = None
    oracle: list | None = None

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "passed": self.passed,
            "mismatch": self.mismatch,
            "polynomials": [str(p) for p in self.table or []],
        }


def flow_polynomials(q: Polynomial, v: Polynomial, x0, n_max: int) -> list[Polynomial]:
    """``n! [L^n] g(L, x0) exp(z (T(L, x0) - x0))`` from the flow solver."""
    x0 = as_fraction(x0)
    tag = x_tag(x0)
    n = max(n_max, 1)
    sol = solve_flow(q.to_series(x0, n, tag), v.to_series(x0, n, tag), x0, n)
    return egf_polynomials(sol.g, sol.T - x0, n_max)


def central_identity_check(q: Polynomial, v: Polynomial, x0, n_max: int = 8, oracle: bool = True) -> CentralIdentityReport:
    """Compare the table, flow and (optionally) oracle routes for n <= n_max."""
    x0 = as_fraction(x0)
    table = weyl_table(q, v, n_max)
    a = [table.evaluate(n, x0) for n in range(n_max + 1)]
    b = flow_polynomials(q, v, x0, n_max)
    c = bargmann_moments(q, v, CoherentParams(x0), n_max) if oracle else None
    for n in range(n_max + 1):
        for k in range(n + 1):
            if a[n].coeff(k) != b[n].coeff(k):
                return CentralIdentityReport(n_max, False, (n, k, "table vs flow"), a, b, c)
            if c is not None and a[n].coeff(k) != c[n].coeff(k):
                return CentralIdentityReport(n_max, False, (n, k, "table vs oracle"), a, b, c)
    return CentralIdentityReport(n_max, True, None, a, b, c)


__all__ = [
    "CentralIdentityReport",
    "CoherentParams",
    "NormalOrderedForm",
    "WeylTable",
    "bargmann_moment",
    "bargmann_moments",
    "bargmann_moments_series",
    "central_identity_check",
    "egf_polynomials",
    "find_closed_form",
    "flow_polynomials",
    "normal_order_exp",
    "render_normal_form",
    "weyl_table",
]
