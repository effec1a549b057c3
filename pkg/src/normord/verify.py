"""Self-contained invariant suite behind ``normord verify --all``.

Every check is deterministic (fixed seeds, exact arithmetic) and reads
nothing but the shipped catalog.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import catalog as _catalog
from .expr import parse, taylor, to_string
from .flow import closed_form_catalog, group_law_check, solve_flow, solve_flow_bivariate, solve_flow_expr
from .series import Polynomial, Series, compose, exp, log, reversion
from .sheffer import (
    ShefferPair,
    binomial_identity_check,
    catalog,
    flow_params_from_sheffer,
    sheffer_from_flow,
    sequence_values,
)
from .weyl import CoherentParams, bargmann_moments, central_identity_check, weyl_table

SEED = 20240601


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def random_fraction(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2, 3)))


def random_series(rng: random.Random, order: int, var: str = "t", const=None) -> Series:
    coeffs = [random_fraction(rng) for _ in range(order + 1)]
    if const is not None:
        coeffs[0] = Fraction(const)
    return Series(coeffs, order, var)


def random_polynomial(rng: random.Random, degree: int = 3, lo: int = -3, hi: int = 3) -> Polynomial:
    return Polynomial([rng.randint(lo, hi) for _ in range(rng.randint(0, degree) + 1)])


def random_pair(rng: random.Random, order: int) -> ShefferPair:
    A = random_series(rng, order, "L", const=1)
    B = random_series(rng, order, "L", const=0)
    if B.coeffs[1] == 0:
        B = B + Series.variable(order, "L")
    return ShefferPair(A, B)


def stirling2(n_max: int) -> list[list[int]]:
    """``S(n, k)`` from ``S(n+1, k) = k S(n, k) + S(n, k-1)``."""
    s = [[1] + [0] * n_max]
    for n in range(n_max):
        prev = s[-1]
        s.append([0] + [k * prev[k] + prev[k - 1] for k in range(1, n_max + 1)])
    return s


def _series_axioms(order: int) -> str:
    rng = random.Random(SEED)
    for _ in range(10):
        f, g, h = (random_series(rng, order) for _ in range(3))
        if (f * g) * h != f * (g * h) or f * (g + h) != f * g + f * h or f * g != g * f:
            return "ring axiom failed"
        u = random_series(rng, order, const=1)
        if u * u.reciprocal() != Series.constant(1, order):
            return "reciprocal failed"
    return ""


def _composition(order: int) -> str:
    rng = random.Random(SEED + 1)
    for _ in range(5):
        f = random_series(rng, order)
        g = random_series(rng, order, const=0)
        h = random_series(rng, order, const=0)
        if compose(compose(f, g), h) != compose(f, compose(g, h)):
            return "composition is not associative"
        b = random_series(rng, order, const=0)
        if b.coeffs[1] == 0:
            b = b + Series.variable(order)
        if compose(b, reversion(b)) != Series.variable(order):
            return "reversion round-trip failed"
        if log(exp(h)) != h:
            return "log(exp(f)) != f"
    return ""


def _parse_print(order: int) -> str:
    cases = [("x*(1+log(x))", 1), ("1/(2-x)", 0), ("(1-2*x)^(-1/2)", 0), ("exp(x^2/2)-sqrt(1+x)", 0), ("-x^3+2/3*x", 5)]
    for text, point in cases:
        node = parse(text)
        if parse(to_string(node)) != node:
            return f"print/parse round-trip failed for {text}"
        if taylor(to_string(node), point, order) != taylor(text, point, order):
            return f"taylor changed after printing {text}"
    return ""


def _catalog_flows(order: int) -> str:
    cases = [("ex1", {}), ("ex2", {"r": 2}), ("ex2", {"r": 3}), ("ex3", {}), ("ex4", {}),
             ("ex5", {"r": 2, "s": 2}), ("ex5", {"r": 3, "s": 0})]
    for name, params in cases:
        ref = closed_form_catalog(name, 1, order, **params)
        sol = solve_flow(ref.q_series, ref.v_series, 1, order)
        if sol.T != ref.T or sol.g != ref.g:
            return f"{name} {params}: closed form differs from solver"
    return ""


def _group_law(order: int) -> str:
    rng = random.Random(SEED + 2)
    flows = []
    for name, params in (("ex1", {}), ("ex2", {"r": 2}), ("ex3", {}), ("ex4", {}), ("ex5", {"r": 2, "s": 2})):
        entry = _catalog.flow_entry(name)
        p = _catalog.resolve_params(entry, **params)
        flows.append((name, _catalog.fill(entry["q"], **p), _catalog.fill(entry["v"], **p)))
    for i in range(3):
        flows.append((f"random {i}", random_polynomial(rng).to_expr(), random_polynomial(rng).to_expr()))
    for name, q, v in flows:
        report = group_law_check(solve_flow_bivariate(q, v, 1, order))
        if not report.passed:
            return f"{name}: {report.mismatches[:3]}"
    return ""


def _central(order: int) -> str:
    rng = random.Random(SEED + 3)
    n = min(order, 8)
    for _ in range(5):
        q, v = random_polynomial(rng), random_polynomial(rng)
        x0 = rng.randint(-2, 2)
        report = central_identity_check(q, v, x0, n)
        if not report.passed:
            return f"q={q}, v={v}, x0={x0}: {report.mismatch}"
    return ""


def _stirling(order: int) -> str:
    n = min(order, 8)
    s = stirling2(n)
    table = weyl_table(Polynomial([0, 1]), Polynomial([0]), n)
    for i in range(n + 1):
        for k in range(1, i + 1):
            if table.f_nk(i, k) != Polynomial.monomial(k, s[i][k]):
                return f"f_({i},{k}) is not S({i},{k}) x^{k}"
    bell = [sum(row) for row in s]
    oracle = bargmann_moments(Polynomial([0, 1]), Polynomial([0]), CoherentParams(1, 1), n)
    if oracle != bell:
        return f"Bell numbers {oracle} != {bell}"
    return ""


def _sheffer_round_trip(order: int) -> str:
    rng = random.Random(SEED + 4)
    for _ in range(5):
        pair = random_pair(rng, order)
        q, v = flow_params_from_sheffer(pair)
        back = sheffer_from_flow(solve_flow(q, v, pair.z_prime_star, pair.order))
        if back.A != pair.A or back.B != pair.B:
            return "(A, B) -> (q, v) -> (A, B) failed"
    for _ in range(3):
        q, v = random_polynomial(rng), random_polynomial(rng)
        if q.coeff(0) + q.coeff(1) + q.coeff(2) + q.coeff(3) == 0:
            q = q + 1
        sol = solve_flow_expr(q.to_expr(), v.to_expr(), 1, order)
        q2, v2 = flow_params_from_sheffer(sheffer_from_flow(sol))
        if q2 != sol.q_series.truncate(q2.order) or v2 != sol.v_series.truncate(v2.order):
            return f"(q, v) -> (A, B) -> (q, v) failed for q={q}, v={v}"
    return ""


def _binomial(order: int) -> str:
    n = min(order, 8)
    for name, params in (("ex1", {}), ("ex2", {"r": 2}), ("ex2", {"r": 3})):
        entry = _catalog.flow_entry(name)
        p = _catalog.resolve_params(entry, **params)
        sol = solve_flow_expr(_catalog.fill(entry["q"], **p), _catalog.fill(entry["v"], **p), 1, n)
        bad = binomial_identity_check(sheffer_from_flow(sol), n)
        if bad is not None:
            return f"{name} {params}: fails at (n, i, j) = {bad}"
    return ""


def _sequences(order: int) -> str:
    n = min(order, 8)
    for name, r in (("forests", 2), ("forests", 3), ("partitions_of_partitions", None), ("arrangements", None), ("bessel", None)):
        result = catalog(name, n, r=r)
        if result.oracle != result.values or not result.integral:
            return f"{name}: oracle disagrees or values not integral"
    arr = sequence_values(ShefferPair.from_expressions("1/(1 - L)", "L", 1, n), 1, n).values
    expect = [sum(Fraction(factorial(k), factorial(j)) for j in range(k + 1)) for k in range(n + 1)]
    if arr != expect:
        return "arrangements differ from n! sum 1/k!"
    return ""


CHECKS = [
    ("series ring axioms", _series_axioms),
    ("composition, reversion, exp/log", _composition),
    ("expression print/parse", _parse_print),
    ("closed-form flows", _catalog_flows),
    ("group law", _group_law),
    ("central identity", _central),
    ("Stirling and Bell", _stirling),
    ("Sheffer round trips", _sheffer_round_trip),
    ("binomial type", _binomial),
    ("catalog sequences vs oracle", _sequences),
]


def run_all(order: int = 8) -> list[CheckResult]:
    results = []
    for name, check in CHECKS:
        try:
            detail = check(order)
        except Exception as exc:  # a crash is a failed check, reported not raised
            detail = f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, not detail, detail))
    return results


__all__ = ["CHECKS", "CheckResult", "random_pair", "random_polynomial", "random_series", "run_all", "stirling2"]
