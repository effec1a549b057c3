"""Exact truncated power series and polynomials over the rationals.

Scalars are :class:`fractions.Fraction`.  A :class:`Series` stores the
coefficients ``c_0 .. c_N`` of a power series known modulo ``t^(N+1)``; its
coefficients are either scalars or, for two-variable work, other
:class:`Series` in an inner variable.  Nested series follow a total-degree
convention: the inner series sitting at outer power ``i`` only claims
precision ``M - i``.  The ordinary min-order rule of the arithmetic carries
that convention through products and sums; :func:`compose` enforces it where
it would otherwise be lost.

Everything is immutable.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Integral, Rational

from .errors import (
    ConstantTermConstraintViolated,
    DivisionByZeroConstantTerm,
    NonzeroInnerConstantTerm,
    NotReversible,
    VariableMismatch,
)

DEFAULT_ORDER = 12


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; refuse floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Integral, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def fraction_to_json(value: Fraction) -> list[str]:
    return [str(value.numerator), str(value.denominator)]


def fraction_from_json(pair) -> Fraction:
    num, den = pair
    return Fraction(int(num), int(den))


def format_fraction(value: Fraction) -> str:
    return str(value)


def _is_zero(c) -> bool:
    if isinstance(c, Series):
        return all(_is_zero(x) for x in c.coeffs)
    return c == 0


def _is_nilpotent(c) -> bool:
    """True when ``c`` vanishes at the origin (scalar zero, or nested series
    whose own constant term vanishes at the origin)."""
    if isinstance(c, Series):
        return _is_nilpotent(c.coeffs[0])
    return c == 0


def _inverse(c):
    if isinstance(c, Series):
        return c.reciprocal()
    if c == 0:
        raise DivisionByZeroConstantTerm("constant term is zero; series is not invertible")
    return 1 / c


def _one_like(c):
    if isinstance(c, Series):
        return Series([_one_like(c.coeffs[0])], c.order, c.var)
    return Fraction(1)


def _zero_like(c):
    if isinstance(c, Series):
        return c * 0
    return Fraction(0)


def _is_scalar(x) -> bool:
    return isinstance(x, (Integral, Rational)) and not isinstance(x, bool)


class Series:
    """Truncated power series ``c_0 + c_1 t + ... + c_N t^N + O(t^(N+1))``."""

    __slots__ = ("_coeffs", "_order", "_var")

    def __init__(self, coeffs, order: int | None = None, var: str = "t"):
        items = []
        for c in coeffs:
            if isinstance(c, Series):
                items.append(c)
            else:
                items.append(as_fraction(c))
        if not items:
            items = [Fraction(0)]
        if order is None:
            order = len(items) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if len(items) > order + 1:
            items = items[: order + 1]
        elif len(items) < order + 1:
            zero = _zero_like(items[0])
            items.extend([zero] * (order + 1 - len(items)))
        self._coeffs = tuple(items)
        self._order = order
        self._var = var

    # construction helpers

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER, var: str = "t") -> "Series":
        return cls([value], order, var)

    @classmethod
    def variable(cls, order: int = DEFAULT_ORDER, var: str = "t", at=0) -> "Series":
        """The series of ``at + t``."""
        return cls([at, 1], order, var)

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def order(self) -> int:
        return self._order

    @property
    def var(self) -> str:
        return self._var

    @property
    def nested(self) -> bool:
        return isinstance(self._coeffs[0], Series)

    def __getitem__(self, k):
        return self._coeffs[k]

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __bool__(self):
        return not _is_zero(self)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self._var == other._var
            and self._order == other._order
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self._var, self._order, self._coeffs))

    def __repr__(self):
        return f"Series({list(self._coeffs)!r}, order={self._order}, var={self._var!r})"

    def __str__(self):
        return render_series(self)

    def truncate(self, order: int) -> "Series":
        if order > self._order:
            raise ValueError(f"cannot raise truncation order {self._order} to {order}")
        return Series(self._coeffs[: order + 1], order, self._var)

    def with_var(self, var: str) -> "Series":
        return Series(self._coeffs, self._order, var)

    def is_zero(self) -> bool:
        return _is_zero(self)

    def map(self, fn) -> "Series":
        return Series([fn(c) for c in self._coeffs], self._order, self._var)

    # arithmetic

    def _check(self, other: "Series"):
        if self._var != other._var:
            raise VariableMismatch(f"series in {self._var!r} combined with series in {other._var!r}")

    def __neg__(self):
        return Series([-c for c in self._coeffs], self._order, self._var)

    def __add__(self, other):
        if isinstance(other, Series):
            self._check(other)
            n = min(self._order, other._order)
            return Series([a + b for a, b in zip(self._coeffs[: n + 1], other._coeffs)], n, self._var)
        if _is_scalar(other):
            return Series((self._coeffs[0] + other,) + self._coeffs[1:], self._order, self._var)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Series):
            return self + (-other)
        if _is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if _is_scalar(other):
            return (-self) + other
        return NotImplemented

    def scale(self, c) -> "Series":
        """Multiply every coefficient by a coefficient-ring element ``c``."""
        return Series([x * c for x in self._coeffs], self._order, self._var)

    def __mul__(self, other):
        if isinstance(other, Series):
            self._check(other)
            n = min(self._order, other._order)
            return Series(_convolve(self._coeffs, other._coeffs, n), n, self._var)
        if _is_scalar(other):
            return self.scale(as_fraction(other))
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Series":
        a = self._coeffs
        inv0 = _inverse(a[0])
        out = [inv0]
        for k in range(1, self._order + 1):
            acc = a[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + a[j] * out[k - j]
            out.append(-(acc * inv0))
        return Series(out, self._order, self._var)

    def __truediv__(self, other):
        if isinstance(other, Series):
            self._check(other)
            return self * other.reciprocal()
        if _is_scalar(other):
            other = as_fraction(other)
            if other == 0:
                raise DivisionByZeroConstantTerm("division of a series by zero")
            return self.scale(1 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return self.reciprocal() * as_fraction(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, Integral):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result = Series([_one_like(self._coeffs[0])], self._order, self._var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __call__(self, inner: "Series") -> "Series":
        return compose(self, inner)

    # serialization

    def to_json(self) -> dict:
        return {
            "var": self._var,
            "order": self._order,
            "coeffs": [c.to_json() if isinstance(c, Series) else fraction_to_json(c) for c in self._coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Series":
        coeffs = [
            cls.from_json(c) if isinstance(c, dict) else fraction_from_json(c)
            for c in data["coeffs"]
        ]
        series = cls(coeffs, int(data["order"]), data["var"])
        if len(data["coeffs"]) != series.order + 1:
            raise ValueError("coefficient list length must equal order + 1")
        return series


def _convolve(a, b, n):
    nested = isinstance(a[0], Series) or isinstance(b[0], Series)
    out = []
    for k in range(n + 1):
        acc = None
        for i in range(k + 1):
            x, y = a[i], b[k - i]
            if not nested and (not x or not y):
                continue
            t = x * y
            acc = t if acc is None else acc + t
        out.append(Fraction(0) if acc is None else acc)
    return out


def arith(f: Series, g: Series, op: str) -> Series:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def compose(f: Series, g: Series) -> Series:
    """Return ``f(g)``.

    ``g`` must vanish at the origin.  When ``g`` is nested (series in an
    outer variable with series coefficients in the inner variable ``f`` is
    written in), only the inner constant has to vanish; the result is then
    trimmed so that outer power ``i`` keeps inner precision ``f.order - i``.
    """
    if not _is_nilpotent(g.coeffs[0]):
        raise NonzeroInnerConstantTerm("inner series of a composition must have zero constant term")
    nested = g.nested
    n = min(f.order, g.order)
    inner = g.truncate(n) if n < g.order else g
    result = inner * 0 + f.coeffs[f.order]
    for c in reversed(f.coeffs[: f.order]):
        result = result * inner + c
    if nested:
        coeffs = []
        for i, c in enumerate(result.coeffs):
            keep = min(c.order, f.order - i)
            coeffs.append(c.truncate(keep) if keep < c.order else c)
        result = Series(coeffs, n, g.var)
    return result


def reversion(f: Series, var: str | None = None) -> Series:
    """Compositional inverse by Lagrange inversion.

    ``[u^n] f^{-1}(u) = (1/n) [t^{n-1}] (t / f(t))^n``.
    """
    if f.nested:
        raise TypeError("reversion is defined for scalar-coefficient series only")
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] == 0:
        raise NotReversible("reversion needs f(0) = 0 and f'(0) != 0")
    n = f.order
    h = Series(f.coeffs[1:], n - 1, f.var).reciprocal()
    out = [Fraction(0)]
    power = h
    for k in range(1, n + 1):
        out.append(power.coeffs[k - 1] / k)
        if k < n:
            power = power * h
    return Series(out, n, var or f.var)


def _scalar_only(f: Series, name: str):
    if f.nested:
        raise TypeError(f"{name} is defined for scalar-coefficient series only")


def exp(f: Series) -> Series:
    _scalar_only(f, "exp")
    a = f.coeffs
    if a[0] != 0:
        raise ConstantTermConstraintViolated("exp needs a series with zero constant term")
    out = [Fraction(1)]
    for k in range(1, f.order + 1):
        acc = sum((j * a[j] * out[k - j] for j in range(1, k + 1) if a[j]), Fraction(0))
        out.append(acc / k)
    return Series(out, f.order, f.var)


def log(f: Series) -> Series:
    _scalar_only(f, "log")
    a = f.coeffs
    if a[0] != 1:
        raise ConstantTermConstraintViolated("log needs a series with constant term exactly 1")
    out = [Fraction(0)]
    for k in range(1, f.order + 1):
        acc = sum((j * out[j] * a[k - j] for j in range(1, k) if a[k - j]), Fraction(0))
        out.append(a[k] - acc / k)
    return Series(out, f.order, f.var)


def power(f: Series, r) -> Series:
    """``f ** r`` for rational ``r``; ``f`` must start with exactly 1."""
    _scalar_only(f, "pow")
    r = as_fraction(r)
    a = f.coeffs
    if a[0] != 1:
        raise ConstantTermConstraintViolated("pow needs a series with constant term exactly 1")
    out = [Fraction(1)]
    for k in range(1, f.order + 1):
        acc = sum(((r + 1) * j - k) * a[j] * out[k - j] for j in range(1, k + 1) if a[j])
        out.append(Fraction(acc) / k)
    return Series(out, f.order, f.var)


def transcend(f: Series, fn: str, r=None) -> Series:
    if fn == "exp":
        return exp(f)
    if fn == "log":
        return log(f)
    if fn == "pow":
        if r is None:
            raise ValueError("pow needs an exponent")
        return power(f, r)
    raise ValueError(f"unknown function {fn!r}")


def differentiate(f: Series) -> Series:
    """Derivative; the result is known to one order less."""
    if f.order == 0:
        raise ValueError("derivative of an order-0 series carries no information")
    return Series([k * c for k, c in enumerate(f.coeffs) if k], f.order - 1, f.var)


def integrate(f: Series) -> Series:
    """Antiderivative with zero constant term, known to one order more."""
    zero = _zero_like(f.coeffs[0])
    return Series([zero] + [c / (k + 1) for k, c in enumerate(f.coeffs)], f.order + 1, f.var)


def calculus(f: Series, op: str) -> Series:
    if op == "differentiate":
        return differentiate(f)
    if op == "integrate":
        return integrate(f)
    raise ValueError(f"unknown operation {op!r}")


# rendering


def _power_str(var: str, k: int) -> str:
    base = var if var.isidentifier() else f"({var})"
    return base if k == 1 else f"{base}^{k}"


def _term(coeff_str: str, var: str, k: int, atomic: bool) -> str:
    if k == 0:
        return coeff_str
    monomial = _power_str(var, k)
    if coeff_str == "1":
        return monomial
    if coeff_str == "-1":
        return "-" + monomial
    if not atomic:
        coeff_str = f"({coeff_str})"
    return f"{coeff_str}*{monomial}"


def _join(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def render_series(f: Series, var: str | None = None, big_o: bool = True) -> str:
    """Ascending-power rendering, e.g. ``1 + 2*L + 1/3*L^3 + O(L^4)``."""
    var = var or f.var
    terms = []
    for k, c in enumerate(f.coeffs):
        if _is_zero(c):
            continue
        if isinstance(c, Series):
            terms.append(_term(render_series(c, big_o=False), var, k, atomic=False))
        else:
            s = format_fraction(c)
            terms.append(_term(s, var, k, atomic=True))
    body = _join(terms)
    if big_o:
        body = f"{body} + O({_power_str(var, f.order + 1)})" if body != "0" else f"O({_power_str(var, f.order + 1)})"
    return body


class Polynomial:
    """Dense univariate polynomial with rational coefficients (ascending)."""

    __slots__ = ("_coeffs", "_var")

    def __init__(self, coeffs=(), var: str = "x"):
        items = [as_fraction(c) for c in coeffs]
        while items and items[-1] == 0:
            items.pop()
        self._coeffs = tuple(items)
        self._var = var

    @classmethod
    def monomial(cls, k: int, coeff=1, var: str = "x") -> "Polynomial":
        return cls([0] * k + [coeff], var)

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def var(self) -> str:
        return self._var

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs and (self._var == other._var or self.degree < 1)
        if _is_scalar(other):
            return self.degree < 1 and self.coeff(0) == other
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self._coeffs]}, var={self._var!r})"

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self._coeffs[k]
            if c:
                terms.append(_term(format_fraction(c), self._var, k, atomic=True))
        return _join(terms)

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if _is_scalar(other):
            return Polynomial([other], self._var)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        if not isinstance(other, Polynomial) and not _is_scalar(other):
            return NotImplemented
        other = self._lift(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial([self.coeff(k) + other.coeff(k) for k in range(n)], self._var)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self._coeffs], self._var)

    def __sub__(self, other):
        if not isinstance(other, Polynomial) and not _is_scalar(other):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            c = as_fraction(other)
            return Polynomial([x * c for x in self._coeffs], self._var)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return Polynomial((), self._var)
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a:
                for j, b in enumerate(other._coeffs):
                    out[i + j] += a * b
        return Polynomial(out, self._var)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, Integral) or n < 0:
            return NotImplemented
        result = Polynomial([1], self._var)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self._coeffs) if k], self._var)

    def __call__(self, value):
        """Horner evaluation; ``value`` may be a scalar, Polynomial or Series."""
        if not self._coeffs:
            return Fraction(0) if _is_scalar(value) else value * 0
        result = self._coeffs[-1]
        for c in reversed(self._coeffs[:-1]):
            result = result * value + c
        if _is_scalar(value) or not isinstance(result, (Series, Polynomial)):
            return as_fraction(result)
        return result

    def to_series(self, point=0, order: int = DEFAULT_ORDER, var: str = "t") -> Series:
        """Taylor series of the polynomial about ``point`` in ``(x - point)``."""
        value = self(Series.variable(order, var, at=as_fraction(point)))
        if isinstance(value, Series):
            return value
        return Series.constant(value, order, var)

    def to_expr(self) -> str:
        """An expression string the parser accepts."""
        if not self._coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self._coeffs[k]
            if not c:
                continue
            mag = format_fraction(abs(c))
            if k == 0:
                body = mag
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if mag == "1" else f"{mag}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {"var": self._var, "coeffs": [fraction_to_json(c) for c in self._coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        return cls([fraction_from_json(c) for c in data["coeffs"]], data.get("var", "x"))
