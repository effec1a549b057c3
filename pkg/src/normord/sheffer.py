"""Sheffer pairs, their polynomials, and the worked combinatorial sequences.

A pair ``(A, B)`` with ``A(0) = 1``, ``B(0) = 0``, ``B'(0) != 0`` defines
``S_n(z) = n! [L^n] A(L) exp(z B(L))``.  Fixing the bra parameter ``z'``, a
flow ``(q, v)`` gives the pair ``A(L) = g(L, z')``, ``B(L) = T(L, z') - z'``;
conversely

    q(x) = B'(B^{-1}(x - z')),   v(x) = A'(B^{-1}(x - z')) / A(B^{-1}(x - z')).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import catalog as _catalog
from .errors import DegenerateB, InsufficientInputOrder, PreconditionError, VerificationFailure
from .expr import canonical, taylor, to_polynomial
from .flow import LAMBDA, FlowSolution, solve_flow, solve_flow_expr, x_tag
from .series import DEFAULT_ORDER, Polynomial, Series, as_fraction, compose, differentiate, reversion
from .weyl import CoherentParams, bargmann_moments, bargmann_moments_series, egf_polynomials


@dataclass(frozen=True)
class ShefferPair:
    A: Series
    B: Series
    z_prime_star: Fraction = Fraction(1)

    def __post_init__(self):
        if self.A.nested or self.B.nested:
            raise PreconditionError("a Sheffer pair has scalar coefficients")
        if self.A.coeffs[0] != 1:
            raise PreconditionError(f"A(0) must be 1, got {self.A.coeffs[0]}")
        if self.B.coeffs[0] != 0:
            raise PreconditionError(f"B(0) must be 0, got {self.B.coeffs[0]}")
        if self.B.order < 1 or self.B.coeffs[1] == 0:
            raise DegenerateB("B'(0) must be nonzero")

    @property
    def order(self) -> int:
        return min(self.A.order, self.B.order)

    @classmethod
    def from_expressions(cls, A: str, B: str, z_prime_star=1, order: int = DEFAULT_ORDER) -> "ShefferPair":
        return cls(
            taylor(A, 0, order, var=LAMBDA),
            taylor(B, 0, order, var=LAMBDA),
            as_fraction(z_prime_star),
        )

    def to_json(self) -> dict:
        zp = self.z_prime_star
        return {"A": self.A.to_json(), "B": self.B.to_json(), "zprime": [str(zp.numerator), str(zp.denominator)]}


def sheffer_from_flow(sol: FlowSolution) -> ShefferPair:
    """``A = g(L, z')``, ``B = T(L, z') - z'`` from a flow solved at ``x0 = z'``."""
    sol = sol.at_point()
    if sol.order < 1 or sol.T.coeffs[1] == 0:
        raise DegenerateB(f"q({sol.x0}) = 0 gives B'(0) = 0")
    return ShefferPair(sol.g, sol.T - sol.x0, sol.x0)


def flow_params_from_sheffer(pair: ShefferPair, order: int | None = None) -> tuple[Series, Series]:
    """Taylor series of q and v about ``z'`` (in ``x - z'``), to ``pair.order - 1``."""
    avail = pair.order - 1
    if order is None:
        order = avail
    if order > avail:
        raise InsufficientInputOrder(f"a pair of order {pair.order} determines q, v only to order {avail}")
    tag = x_tag(pair.z_prime_star)
    A = pair.A.truncate(pair.order)
    B = pair.B.truncate(pair.order)
    binv = reversion(B, var=tag).truncate(order)
    q = compose(differentiate(B), binv)
    log_deriv = differentiate(A) / A.truncate(A.order - 1)
    v = compose(log_deriv, binv)
    return q, v


def sheffer_polynomials(pair: ShefferPair, n_max: int) -> list[Polynomial]:
    """``S_0 .. S_{n_max}`` as exact polynomials in z."""
    return egf_polynomials(pair.A, pair.B, n_max)


def _bivariate(p: Polynomial) -> dict:
    """``p(z1 + z2)`` as ``{(i, j): coeff}`` of ``z1^i z2^j``."""
    out: dict = {}
    for m, c in enumerate(p.coeffs):
        for i in range(m + 1):
            out[(i, m - i)] = out.get((i, m - i), 0) + c * comb(m, i)
    return out


def binomial_identity_check(pair: ShefferPair, n_max: int) -> tuple[int, ...] | None:
    """Check ``S_n(z1+z2) = sum_k C(n,k) S_k(z1) s_{n-k}(z2)`` for n <= n_max.

    ``s_n`` is the associated sequence of the pair ``(1, B)``; when ``A = 1``
    it is ``S_n`` itself and this is the binomial-type identity.  Both sides
    are compared coefficient by coefficient in ``z1^i z2^j``.  Returns None
    when every identity holds, else the first failing ``(n, i, j)``.
    """
    polys = sheffer_polynomials(pair, n_max)
    one = Series.constant(1, pair.B.order, pair.B.var)
    assoc = polys if pair.A.truncate(n_max) == one.truncate(n_max) else egf_polynomials(one, pair.B, n_max)
    for n in range(n_max + 1):
        left = _bivariate(polys[n])
        right: dict = {}
        for k in range(n + 1):
            w = comb(n, k)
            for i, a in enumerate(polys[k].coeffs):
                for j, b in enumerate(assoc[n - k].coeffs):
                    right[(i, j)] = right.get((i, j), 0) + w * a * b
        for key in sorted(set(left) | set(right)):
            if left.get(key, 0) != right.get(key, 0):
                return (n, *key)
    return None


@dataclass
class SequenceResult:
    name: str
    parameters: dict
    values: list
    provenance: dict = field(default_factory=dict)
    annotations: list = field(default_factory=list)
    oracle: list | None = None

    @property
    def integral(self) -> bool:
        return all(Fraction(v).denominator == 1 for v in self.values)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "values": [str(v) for v in self.values],
            "integral": self.integral,
            "provenance": self.provenance,
            "annotations": self.annotations,
            "oracle": None if self.oracle is None else [str(v) for v in self.oracle],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "a(n)"])
        for n, v in enumerate(self.values):
            writer.writerow([n, str(v)])
        return buf.getvalue()


def sequence_values(pair: ShefferPair, z=1, n_max: int = 8, name: str = "sequence", provenance=None) -> SequenceResult:
    """``a(n) = S_n(z)`` for n = 0..n_max."""
    z = as_fraction(z)
    values = [p(z) for p in sheffer_polynomials(pair, n_max)]
    return SequenceResult(
        name,
        {"z": z, "zprime": pair.z_prime_star, "n_max": n_max},
        values,
        dict(provenance or {}),
    )


def compare_printed(printed, computed) -> list[str]:
    """Describe how a printed list of terms deviates from the computed one."""
    printed = [Fraction(p) for p in printed]
    computed = list(computed)
    if computed[: len(printed)] == printed:
        return []
    notes = []
    for skip in range(len(printed) + 1):
        candidate = computed[:skip] + computed[skip + 1 : len(printed) + 1]
        if candidate == printed:
            return [f"printed list omits a({skip}) = {computed[skip]}"]
    for n, (p, c) in enumerate(zip(printed, computed)):
        if p != c:
            notes.append(f"printed a({n}) = {p}, computed a({n}) = {c}")
    return notes


def catalog(entry: str, n_max: int = 6, r: int | None = None, verify_oracle: bool = True) -> SequenceResult:
    """Run a worked example through the full pipeline.

    Flow entries go expression -> flow -> pair -> sequence.  Pair entries go
    expression -> (q, v) -> flow -> pair -> sequence, which also round-trips
    the pair.  The Bargmann oracle gives an independent value list: on the
    polynomial q, v directly when they are polynomials, otherwise on their
    Taylor series about z'.
    """
    data = _catalog.sequence_entry(entry)
    params = _catalog.resolve_params(data, r=r)
    zp = as_fraction(data["zprime"])
    z = as_fraction(data["z"])
    order = max(n_max, 1)
    tag = x_tag(zp)
    provenance: dict = {"pipeline": "", "zprime": str(zp), "z": str(z)}
    annotations: list[str] = []
    if data["kind"] == "flow":
        q_text = _catalog.fill(data["q"], **params)
        v_text = _catalog.fill(data["v"], **params)
        sol = solve_flow_expr(q_text, v_text, zp, order)
        pair = sheffer_from_flow(sol)
        provenance.update(pipeline="expr -> flow -> sheffer -> sequence", q=canonical(q_text), v=canonical(v_text))
        q_ser, v_ser = sol.q_series, sol.v_series
    else:
        start = ShefferPair.from_expressions(data["A"], data["B"], zp, order + 1)
        q_ser, v_ser = flow_params_from_sheffer(start)
        sol = solve_flow(q_ser, v_ser, zp, order + 1)
        pair = sheffer_from_flow(sol)
        if pair.A != start.A or pair.B != start.B:
            raise VerificationFailure(f"{entry}: (A, B) -> (q, v) -> (A, B) did not round-trip")
        provenance.update(pipeline="expr -> (q, v) -> flow -> sheffer -> sequence", A=data["A"], B=data["B"])
        q_text = _catalog.fill(data["q"], **params)
        v_text = _catalog.fill(data["v"], **params)
        expected_q = taylor(q_text, zp, q_ser.order, var=tag)
        expected_v = taylor(v_text, zp, v_ser.order, var=tag)
        if expected_q != q_ser or expected_v != v_ser:
            raise VerificationFailure(f"{entry}: derived q, v differ from q = {q_text}, v = {v_text}")
        provenance.update(q=canonical(q_text), v=canonical(v_text))
    result = sequence_values(pair, z, n_max, entry)
    result.provenance = provenance
    result.parameters.update({k: params[k] for k in data.get("params", {})})

    oracle = None
    if verify_oracle:
        try:
            qp = to_polynomial(q_text)
            vp = to_polynomial(v_text)
        except PreconditionError:
            qp = vp = None
        if qp is not None:
            oracle = bargmann_moments(qp, vp, CoherentParams(zp, z), n_max)
            provenance["oracle"] = "bargmann (polynomial)"
        else:
            oracle = bargmann_moments_series(q_ser, v_ser, n_max, z)
            provenance["oracle"] = "bargmann (series about z')"
        if oracle != result.values:
            raise VerificationFailure(f"{entry}: oracle {oracle} disagrees with pipeline {result.values}")
    result.oracle = oracle

    printed = data.get("printed")
    if isinstance(printed, dict):
        printed = printed.get(str(params.get("r")))
    if printed:
        full = result.values
        if len(full) < len(printed) + 1:
            full = sequence_values(pair if pair.order >= len(printed) else _extend(entry, params, len(printed)), z, len(printed)).values
        annotations = compare_printed(printed, full)
        provenance["printed"] = [str(p) for p in printed]
    result.annotations = annotations
    return result


def _extend(entry: str, params: dict, n: int) -> ShefferPair:
    data = _catalog.sequence_entry(entry)
    zp = as_fraction(data["zprime"])
    if data["kind"] == "flow":
        sol = solve_flow_expr(_catalog.fill(data["q"], **params), _catalog.fill(data["v"], **params), zp, n)
        return sheffer_from_flow(sol)
    return ShefferPair.from_expressions(data["A"], data["B"], zp, n)


__all__ = [
    "SequenceResult",
    "ShefferPair",
    "binomial_identity_check",
    "catalog",
    "compare_printed",
    "flow_params_from_sheffer",
    "sequence_values",
    "sheffer_from_flow",
    "sheffer_polynomials",
]
