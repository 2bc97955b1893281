"""Truncated power series in X with coefficients in the word algebra.

Two products live on the same carrier and are kept apart on purpose:
:func:`series_concat_mul` (concatenation, used by geometric series) and
:func:`series_harmonic_mul` (harmonic product, used by ``exp_star``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import (
    AlgebraElement,
    circ,
    concat_mul,
    concat_power,
    harmonic_mul,
)
from .exact import RatSeries


class AlgSeries:
    """sum_{n <= order} a_n X^n with algebra-element coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence[AlgebraElement], order: int):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = []
        for n in range(order + 1):
            c = coeffs[n] if n < len(coeffs) else AlgebraElement.zero()
            cs.append(c if c is not None else AlgebraElement.zero())
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, order: int) -> "AlgSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "AlgSeries":
        return cls([AlgebraElement.one()], order)

    @classmethod
    def monomial(cls, element: AlgebraElement, degree: int, order: int) -> "AlgSeries":
        cs = [AlgebraElement.zero()] * (order + 1)
        if degree <= order:
            cs[degree] = element
        return cls(cs, order)

    def __getitem__(self, n: int) -> AlgebraElement:
        return self.coeffs[n]

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, AlgSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __add__(self, other: "AlgSeries") -> "AlgSeries":
        m = min(self.order, other.order)
        return AlgSeries([self.coeffs[n] + other.coeffs[n] for n in range(m + 1)], m)

    def __neg__(self):
        return AlgSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgSeries":
        return AlgSeries([x.scale(c) for x in self.coeffs], self.order)

    def truncate(self, order: int) -> "AlgSeries":
        return AlgSeries(self.coeffs, min(order, self.order))

    def substitute_sign(self) -> "AlgSeries":
        """Return f(-X)."""
        return AlgSeries([c if n % 2 == 0 else -c for n, c in enumerate(self.coeffs)], self.order)

    def map(self, fn: Callable[[int, AlgebraElement], AlgebraElement]) -> "AlgSeries":
        return AlgSeries([fn(n, c) for n, c in enumerate(self.coeffs)], self.order)

    def to_text(self, var: str = "X") -> str:
        parts = []
        for n, c in enumerate(self.coeffs):
            if c:
                body = c.to_text()
                if n == 0:
                    parts.append(f"({body})")
                else:
                    mono = var if n == 1 else f"{var}^{n}"
                    parts.append(f"({body})*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({var}^{self.order + 1})"

    def __repr__(self):
        return f"AlgSeries({self.to_text()})"


def _cauchy(f: AlgSeries, g: AlgSeries, mul) -> AlgSeries:
    m = min(f.order, g.order)
    out = [AlgebraElement.zero()] * (m + 1)
    for i in range(m + 1):
        if not f.coeffs[i]:
            continue
        for j in range(m + 1 - i):
            if g.coeffs[j]:
                out[i + j] = out[i + j] + mul(f.coeffs[i], g.coeffs[j])
    return AlgSeries(out, m)


def series_harmonic_mul(f: AlgSeries, g: AlgSeries) -> AlgSeries:
    """Cauchy product with the harmonic product on coefficients."""
    return _cauchy(f, g, harmonic_mul)


def series_concat_mul(f: AlgSeries, g: AlgSeries) -> AlgSeries:
    return _cauchy(f, g, concat_mul)


def series_circ(f: AlgSeries, g: AlgSeries) -> AlgSeries:
    """Cauchy product with the letter contraction; both series single-letter valued."""
    return _cauchy(f, g, circ)


def concat_inverse(f: AlgSeries) -> AlgSeries:
    """Inverse for concatenation of a series with constant term 1."""
    if f.coeffs[0] != AlgebraElement.one():
        raise ValueError("concat_inverse needs constant term 1")
    out = [AlgebraElement.one()] + [AlgebraElement.zero()] * f.order
    for n in range(1, f.order + 1):
        acc = AlgebraElement.zero()
        for k in range(1, n + 1):
            if f.coeffs[k] and out[n - k]:
                acc = acc + concat_mul(out[n - k], f.coeffs[k])
        out[n] = -acc
    return AlgSeries(out, f.order)


def geometric_inverse(u: AlgebraElement, step: int, sign: int, order: int) -> AlgSeries:
    """1 / (1 + sign * u X^step) = sum_r (-sign)^r u^r X^(r*step), concatenation powers."""
    if step < 1:
        raise ValueError("step must be >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    cs = [AlgebraElement.zero()] * (order + 1)
    cs[0] = AlgebraElement.one()
    power = AlgebraElement.one()
    r = 1
    while r * step <= order:
        power = concat_mul(power, u)
        cs[r * step] = power.scale((-sign) ** r)
        r += 1
    return AlgSeries(cs, order)


def harmonic_power_series(f: AlgSeries, n: int) -> AlgSeries:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = f
    for _ in range(n - 1):
        out = series_harmonic_mul(out, f)
    return out


def exp_star(f: AlgSeries) -> AlgSeries:
    """1 + sum_n f^{*n} / n!, stopping once f^{*n} is beyond the order."""
    if f.coeffs[0]:
        raise ValueError("exp_star needs a series with zero constant term")
    out = AlgSeries.one(f.order)
    v = f.valuation()
    if v is None:
        return out
    power = f
    n = 1
    while n * v <= f.order:
        out = out + power.scale(Fraction(1, math.factorial(n)))
        n += 1
        if n * v <= f.order:
            power = series_harmonic_mul(power, f)
    return out


def rat_times_element(s: RatSeries, element: AlgebraElement, order: int | None = None) -> AlgSeries:
    """The series sum_n s_n X^n * element for a parameter-free rational series."""
    order = s.order if order is None else min(order, s.order)
    return AlgSeries([element.scale(s[n]) if s[n] else None for n in range(order + 1)], order)


def log_geometric_exponent(u: AlgebraElement, order: int) -> AlgSeries:
    """sum_{n>=1} (-1)^(n-1)/n u^{o n} X^n, the exponent whose exp_star is 1/(1 - uX)."""
    cs = [AlgebraElement.zero()] * (order + 1)
    power = None
    for n in range(1, order + 1):
        power = u if power is None else circ(power, u)
        cs[n] = power.scale(Fraction((-1) ** (n - 1), n))
    return AlgSeries(cs, order)


__all__ = [
    "AlgSeries",
    "concat_inverse",
    "concat_power",
    "exp_star",
    "geometric_inverse",
    "harmonic_power_series",
    "log_geometric_exponent",
    "rat_times_element",
    "series_circ",
    "series_concat_mul",
    "series_harmonic_mul",
]
