"""Exact scalars, Laurent polynomials in h, and truncated rational power series.

Rationals are :class:`fractions.Fraction`.  ``LaurentPoly`` models the
coefficient ring Q[h, 1/h]; ``RatSeries`` is a truncated power series whose
coefficients are dense polynomials in at most one commuting parameter
(``theta`` or ``omega``) over Q.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class LaurentPoly:
    """Finite Q-linear combination of integer powers of h.  Immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[int(e)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, exp: int, c=1) -> "LaurentPoly":
        return cls({exp: c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, ZERO) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, ZERO) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible in Q[h, 1/h]")
            ((e, c),) = self._terms.items()
            return LaurentPoly({e * n: c**n})
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by h**k."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def evaluate(self, h):
        """Substitute a nonzero numeric (or Fraction) value for h."""
        if h == 0:
            raise ZeroDivisionError("h must be nonzero")
        if isinstance(h, (int, Fraction)):
            h = Fraction(h)
            return sum((c * h**e for e, c in self._terms.items()), ZERO)
        return sum(float(c) * h**e for e, c in self._terms.items())

    def __repr__(self):
        return f"LaurentPoly({self.to_text()})"

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            parts.append(_scalar_term_text(c, e))
        return _join_signed(parts)


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.const(x)


def _scalar_term_text(c: Fraction, e: int) -> str:
    hpart = "" if e == 0 else ("h" if e == 1 else f"h^{e}")
    if not hpart:
        return str(c)
    if c == 1:
        return hpart
    if c == -1:
        return "-" + hpart
    return f"{c}*{hpart}"


def _join_signed(parts: Sequence[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------
# dense polynomials in one parameter, as tuples of Fractions (low degree first)

Poly = tuple


def poly_trim(p: Iterable) -> Poly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(Fraction(c) for c in p)


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return poly_trim(
        (a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)
    )


def poly_neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def poly_scale(a: Poly, c) -> Poly:
    c = Fraction(c)
    if not c:
        return ()
    return tuple(x * c for x in a)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_eval(a: Poly, t):
    acc = 0
    for c in reversed(a):
        acc = acc * t + (c if isinstance(t, (int, Fraction)) else float(c))
    return acc


def poly_text(a: Poly, var: str = "t") -> str:
    if not a:
        return "0"
    parts = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if not c:
            continue
        if d == 0:
            parts.append(str(c))
            continue
        mono = var if d == 1 else f"{var}^{d}"
        if c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return _join_signed(parts)


# ---------------------------------------------------------------------------


class RatSeries:
    """Truncated power series sum_{n<=order} c_n x^n, c_n in Q[param].

    Coefficient ``n`` is exact for every ``n <= order``; anything beyond is
    discarded.  ``param`` names the commuting parameter or is ``None`` when
    every coefficient is a plain rational.
    """

    __slots__ = ("order", "coeffs", "param")

    def __init__(self, coeffs: Sequence, order: int, param: str | None = None):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = []
        for n in range(order + 1):
            c = coeffs[n] if n < len(coeffs) else ()
            if isinstance(c, (int, Fraction)):
                c = (Fraction(c),)
            cs.append(poly_trim(c))
        self.order = order
        self.coeffs = tuple(cs)
        self.param = param

    # construction helpers
    @classmethod
    def from_rationals(cls, values: Sequence, order: int) -> "RatSeries":
        return cls([(Fraction(v),) for v in values], order)

    @classmethod
    def zero(cls, order: int, param: str | None = None) -> "RatSeries":
        return cls([], order, param)

    @classmethod
    def one(cls, order: int, param: str | None = None) -> "RatSeries":
        return cls([(ONE,)], order, param)

    @classmethod
    def x(cls, order: int) -> "RatSeries":
        return cls([(), (ONE,)], order)

    def __getitem__(self, n: int) -> Fraction:
        """Rational coefficient of x**n (parameter-free series only)."""
        c = self.coeffs[n]
        if len(c) > 1:
            raise ValueError(f"coefficient {n} depends on {self.param}")
        return c[0] if c else ZERO

    def coeff(self, n: int) -> Poly:
        return self.coeffs[n] if n <= self.order else ()

    def rationals(self) -> list[Fraction]:
        return [self[n] for n in range(self.order + 1)]

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def _merge_param(self, other: "RatSeries") -> str | None:
        if self.param is None:
            return other.param
        if other.param is None or other.param == self.param:
            return self.param
        raise ValueError(f"parameter mismatch: {self.param!r} vs {other.param!r}")

    def __eq__(self, other):
        if not isinstance(other, RatSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __add__(self, other):
        if not isinstance(other, RatSeries):
            other = RatSeries([(Fraction(other),)], self.order, self.param)
        param = self._merge_param(other)
        m = min(self.order, other.order)
        return RatSeries([poly_add(self.coeffs[n], other.coeffs[n]) for n in range(m + 1)], m, param)

    __radd__ = __add__

    def __neg__(self):
        return RatSeries([poly_neg(c) for c in self.coeffs], self.order, self.param)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatSeries):
            return rat_series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "RatSeries":
        return RatSeries([poly_scale(p, c) for p in self.coeffs], self.order, self.param)

    def scale_poly(self, p: Poly, param: str) -> "RatSeries":
        """Multiply every coefficient by the parameter polynomial ``p``."""
        if self.param not in (None, param):
            raise ValueError(f"parameter mismatch: {self.param!r} vs {param!r}")
        p = poly_trim(p)
        return RatSeries([poly_mul(c, p) for c in self.coeffs], self.order, param)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = RatSeries.one(self.order, self.param)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def truncate(self, order: int) -> "RatSeries":
        return RatSeries(self.coeffs, min(order, self.order), self.param)

    def substitute_param(self, value) -> "RatSeries":
        """Evaluate the parameter at an exact rational value."""
        value = Fraction(value)
        return RatSeries([(poly_eval(c, value),) for c in self.coeffs], self.order)

    def substitute_power(self, c, e: int) -> "RatSeries":
        """Return f(c * x**e) truncated to the same order."""
        out = [()] * (self.order + 1)
        c = Fraction(c)
        for n, p in enumerate(self.coeffs):
            if p and n * e <= self.order:
                out[n * e] = poly_scale(p, c**n)
        return RatSeries(out, self.order, self.param)

    def shift_down(self, k: int = 1) -> "RatSeries":
        """Divide by x**k; the low coefficients must vanish."""
        if any(self.coeffs[n] for n in range(min(k, self.order + 1))):
            raise ValueError("series is not divisible by the requested power of x")
        return RatSeries(self.coeffs[k:], self.order - k, self.param)

    def derivative(self) -> "RatSeries":
        if self.order == 0:
            return RatSeries.zero(0, self.param)
        return RatSeries(
            [poly_scale(self.coeffs[n], n) for n in range(1, self.order + 1)], self.order - 1, self.param
        )

    def to_text(self, var: str = "x") -> str:
        parts = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            cp = poly_text(c, self.param or "t")
            mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
            if not mono:
                parts.append(cp)
            elif len([v for v in c if v]) > 1:
                parts.append(f"({cp})*{mono}")
            elif cp == "1":
                parts.append(mono)
            elif cp == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cp}*{mono}")
        body = _join_signed(parts) if parts else "0"
        return f"{body} + O({var}^{self.order + 1})"

    def __repr__(self):
        return f"RatSeries({self.to_text()})"


def rat_series_mul(a: RatSeries, b: RatSeries) -> RatSeries:
    """Cauchy product truncated at the smaller order."""
    param = a._merge_param(b)
    m = min(a.order, b.order)
    out = [()] * (m + 1)
    for i in range(m + 1):
        ai = a.coeffs[i]
        if not ai:
            continue
        for j in range(m + 1 - i):
            bj = b.coeffs[j]
            if bj:
                out[i + j] = poly_add(out[i + j], poly_mul(ai, bj))
    return RatSeries(out, m, param)


def _require_no_constant(f: RatSeries, what: str) -> None:
    if f.coeffs[0]:
        raise ValueError(f"{what} needs a series with zero constant term")


def rat_series_exp(f: RatSeries) -> RatSeries:
    """exp(f) for f with zero constant term (n g_n = sum_k k f_k g_{n-k})."""
    _require_no_constant(f, "exp")
    g = [()] * (f.order + 1)
    g[0] = (ONE,)
    for n in range(1, f.order + 1):
        acc = ()
        for k in range(1, n + 1):
            if f.coeffs[k] and g[n - k]:
                acc = poly_add(acc, poly_scale(poly_mul(f.coeffs[k], g[n - k]), k))
        g[n] = poly_scale(acc, Fraction(1, n))
    return RatSeries(g, f.order, f.param)


def rat_series_log1p(f: RatSeries) -> RatSeries:
    """log(1 + f) for f with zero constant term."""
    _require_no_constant(f, "log1p")
    g = [()] * (f.order + 1)
    for n in range(1, f.order + 1):
        acc = poly_scale(f.coeffs[n], n)
        for k in range(1, n):
            if g[k] and f.coeffs[n - k]:
                acc = poly_add(acc, poly_scale(poly_mul(g[k], f.coeffs[n - k]), -k))
        g[n] = poly_scale(acc, Fraction(1, n))
    return RatSeries(g, f.order, f.param)


def compose(outer: Sequence, inner: RatSeries) -> RatSeries:
    """sum_n outer[n] * inner**n with rational ``outer`` and inner(0) = 0."""
    _require_no_constant(inner, "composition")
    m = inner.order
    out = RatSeries.zero(m, inner.param)
    power = RatSeries.one(m, inner.param)
    for n in range(m + 1):
        if n < len(outer) and outer[n]:
            out = out + power.scale(outer[n])
        power = power * inner
    return out


def multisection(f: RatSeries, d: int) -> RatSeries:
    """sum_{m=1}^{d} f(eps_d^m x) without complex arithmetic.

    Keeps the exponents divisible by ``d`` and multiplies them by ``d``.
    """
    if d < 1:
        raise ValueError("multisection step must be >= 1")
    out = [poly_scale(c, d) if n % d == 0 else () for n, c in enumerate(f.coeffs)]
    return RatSeries(out, f.order, f.param)


# ---------------------------------------------------------------------------
# classical exact Taylor coefficients used throughout


def exp_coefficients(order: int) -> list[Fraction]:
    return [Fraction(1, math.factorial(n)) for n in range(order + 1)]


def log1p_coefficients(order: int) -> list[Fraction]:
    return [ZERO] + [Fraction((-1) ** (n + 1), n) for n in range(1, order + 1)]


def sin_coefficients(order: int) -> list[Fraction]:
    out = [ZERO] * (order + 1)
    for n in range(1, order + 1, 2):
        out[n] = Fraction((-1) ** ((n - 1) // 2), math.factorial(n))
    return out


def arcsin_coefficients(order: int) -> list[Fraction]:
    """arcsin(x) = sum_j binom(2j, j) / (4^j (2j+1)) x^(2j+1)."""
    out = [ZERO] * (order + 1)
    for j in range((order - 1) // 2 + 1):
        n = 2 * j + 1
        if n <= order:
            out[n] = Fraction(math.comb(2 * j, j), 4**j * n)
    return out
