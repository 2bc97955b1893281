"""Stirling numbers, nested harmonic sums, C-coefficients and Bernoulli numbers.

Everything is exact.  Tables are memoised with ``functools.lru_cache``, which
is safe for concurrent readers.

The ``check_*`` functions at the bottom evaluate the classical Stirling
identities over index ranges and return a list of failures (empty list means
the identity holds on the whole range).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .exact import RatSeries, exp_coefficients, rat_series_log1p

FIRST = "first"
SECOND = "second"


@lru_cache(maxsize=None)
def _stirling1(m: int, n: int) -> int:
    if m == 0 or n == 0:
        return 1 if m == n else 0
    if n > m:
        return 0
    return _stirling1(m - 1, n - 1) + (m - 1) * _stirling1(m - 1, n)


@lru_cache(maxsize=None)
def _stirling2(m: int, n: int) -> int:
    if m == 0 or n == 0:
        return 1 if m == n else 0
    if n > m:
        return 0
    return _stirling2(m - 1, n - 1) + n * _stirling2(m - 1, n)


def stirling(kind: str, m: int, n: int) -> Fraction:
    """Unsigned Stirling number of the first kind [m n] or second kind {m n}."""
    if m < 0 or n < 0:
        raise ValueError("Stirling indices must be non-negative")
    if kind == FIRST:
        return Fraction(_stirling1(m, n))
    if kind == SECOND:
        return Fraction(_stirling2(m, n))
    raise ValueError(f"unknown Stirling kind {kind!r}")


def stirling1(m: int, n: int) -> int:
    return _stirling1(m, n)


def stirling2(m: int, n: int) -> int:
    return _stirling2(m, n)


@lru_cache(maxsize=None)
def _elementary_table(n: int, power: int) -> tuple[Fraction, ...]:
    # e_r(1/1^p, ..., 1/(n-1)^p) for r = 0..n-1
    e = [Fraction(1)]
    for m in range(1, n):
        x = Fraction(1, m**power)
        e = [e[r] + (x * e[r - 1] if r else 0) for r in range(len(e))] + [x * e[-1]]
    return tuple(e)


def harmonic(r: int, n: int) -> Fraction:
    """H_r(n) = sum over 0<m_1<...<m_r<n of 1/(m_1...m_r); H_0(n) = 1."""
    if r < 0 or n < 1:
        raise ValueError("need r >= 0 and n >= 1")
    table = _elementary_table(n, 1)
    return table[r] if r < len(table) else Fraction(0)


def harmonic2(r: int, n: int) -> Fraction:
    """Same nested sum with squared denominators."""
    if r < 0 or n < 1:
        raise ValueError("need r >= 0 and n >= 1")
    table = _elementary_table(n, 2)
    return table[r] if r < len(table) else Fraction(0)


def c_coeff(m: int, n1: int, n2: int) -> Fraction:
    """C_m(n1, n2) = sum_a (-1)^(m-a) H_a(n1) H_{m-a}(n2)."""
    if m < 0 or n1 < 1 or n2 < 1:
        raise ValueError("need m >= 0 and n1, n2 >= 1")
    if m >= n1 + n2 - 1:
        return Fraction(0)
    return sum(
        ((-1) ** (m - a) * harmonic(a, n1) * harmonic(m - a, n2) for a in range(m + 1)),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return tuple(b)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number with B_1 = -1/2 and B_2 = 1/6.

    The even ones satisfy log(sin(pi i x)/(pi i x)) = sum B_2n/(2n)! (2 pi x)^2n/(2n).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return _bernoulli_table(n)[n]


def zeta_even(k: int) -> Fraction:
    """Rational r with zeta(k) = r * pi**k for even k >= 2."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    return Fraction((-1) ** (k // 2 + 1) * 2 ** (k - 1), math.factorial(k)) * bernoulli(k)


# ---------------------------------------------------------------------------
# identity checks


def check_recurrence(mmax: int) -> list:
    failures = []
    for kind in (FIRST, SECOND):
        for m in range(mmax + 1):
            if stirling(kind, m, 0) != (m == 0) or stirling(kind, 0, m) != (m == 0):
                failures.append((kind, "boundary", m))
            for n in range(1, mmax + 1):
                if 1 <= m < n and stirling(kind, m, n) != 0:
                    failures.append((kind, "vanishing", m, n))
                if m >= 1:
                    mult = (m - 1) if kind == FIRST else n
                    rhs = stirling(kind, m - 1, n - 1) + mult * stirling(kind, m - 1, n)
                    if stirling(kind, m, n) != rhs:
                        failures.append((kind, "recurrence", m, n))
    return failures


def check_second_exp(mmax: int = 6, nmax: int = 14) -> list:
    """(e^T - 1)^m / m! = sum_n {n m} T^n / n!."""
    expm1 = RatSeries.from_rationals([0] + exp_coefficients(nmax)[1:], nmax)
    failures = []
    for m in range(1, mmax + 1):
        lhs = (expm1**m).scale(Fraction(1, math.factorial(m)))
        for n in range(nmax + 1):
            if lhs[n] != Fraction(stirling2(n, m), math.factorial(n)):
                failures.append((m, n))
    return failures


def check_first_log(mmax: int = 6, nmax: int = 14) -> list:
    """(-log(1 - T))^m / m! = sum_n [n m] T^n / n!."""
    minus_log = -rat_series_log1p(RatSeries.from_rationals([0, -1], nmax))
    failures = []
    for m in range(1, mmax + 1):
        lhs = (minus_log**m).scale(Fraction(1, math.factorial(m)))
        for n in range(nmax + 1):
            if lhs[n] != Fraction(stirling1(n, m), math.factorial(n)):
                failures.append((m, n))
    return failures


def check_duality(nmax: int = 12) -> list:
    """sum_j (-1)^j {m j}[j n] = (-1)^m delta_{m,n}."""
    failures = []
    for m in range(nmax + 1):
        for n in range(nmax + 1):
            total = sum((-1) ** j * stirling2(m, j) * stirling1(j, n) for j in range(m + 1))
            if total != ((-1) ** m if m == n else 0):
                failures.append((m, n))
    return failures


def check_shifted_factorial(mmax: int = 10) -> list:
    """prod_{a=1}^m (z + a) = sum_a [m+1, a+1] z^a."""
    failures = []
    for m in range(mmax + 1):
        poly = [1]
        for a in range(1, m + 1):
            shifted = [0] + poly
            poly = [shifted[i] + a * (poly[i] if i < len(poly) else 0) for i in range(len(shifted))]
        expected = [stirling1(m + 1, a + 1) for a in range(m + 1)]
        if poly != expected:
            failures.append(m)
    return failures


def check_binom_power_sum(nmax: int = 10) -> list:
    """sum_l (-1)^l binom(n, l) l^m = (-1)^n n! {m n}."""
    failures = []
    for m in range(nmax + 1):
        for n in range(nmax + 1):
            lhs = sum((-1) ** l * math.comb(n, l) * l**m for l in range(n + 1))
            if lhs != (-1) ** n * math.factorial(n) * stirling2(m, n):
                failures.append((m, n))
    return failures


def check_first_harmonic(lmax: int = 10, kmax: int = 5) -> list:
    """[l 1] = (l-1)!  and  [l k] = (l-1)! H_{k-1}(l) for k >= 2."""
    failures = []
    for l in range(1, lmax + 1):
        for k in range(1, kmax + 1):
            if stirling1(l, k) != math.factorial(l - 1) * harmonic(k - 1, l):
                failures.append((l, k))
    return failures


def check_power_sum_stirling(nmax: int = 10) -> list:
    """sum_k (-1)^k binom(n,k)(k+1)^m = (-1)^n n! {m+1, n+1}, plus the vanishing case n > m."""
    failures = []
    for m in range(nmax + 1):
        for n in range(1, nmax + 1):
            full = sum((-1) ** k * math.comb(n, k) * (k + 1) ** m for k in range(n + 1))
            if full != (-1) ** n * math.factorial(n) * stirling2(m + 1, n + 1):
                failures.append(("full", m, n))
            if n > m:
                partial = full - (-1) ** n * (n + 1) ** m
                if partial != (-1) ** (n - 1) * (n + 1) ** m:
                    failures.append(("arcsin", m, n))
    return failures


# bivariate polynomials as {(deg_x, deg_y): Fraction}


def _bi_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            out[(i + k, j + l)] = out.get((i + k, j + l), 0) + c * d
    return {key: c for key, c in out.items() if c}


def _bi_prod(factors) -> dict:
    out = {(0, 0): Fraction(1)}
    for f in factors:
        out = _bi_mul(out, f)
    return out


def _falling(n: int) -> list[int]:
    # coefficients of prod_{a=1}^n (t - a), low degree first
    poly = [1]
    for a in range(1, n + 1):
        shifted = [0] + poly
        poly = [shifted[i] - a * (poly[i] if i < len(poly) else 0) for i in range(len(shifted))]
    return poly


def divided_difference_sides(n: int) -> tuple[dict, dict]:
    """Both sides of the divided-difference identity for prod_{a=1}^n (t - a)."""
    coeffs = _falling(n)
    lhs: dict = {}
    for i, c in enumerate(coeffs):
        for j in range(i):
            key = (j, i - 1 - j)
            lhs[key] = lhs.get(key, 0) + Fraction(c)
    lhs = {k: c for k, c in lhs.items() if c}

    rhs: dict = {}
    for k in range(n):
        ratio = Fraction(k + 1, n + 1)
        factors = [{(0, 1): ratio, (0, 0): Fraction(-a)} for a in range(1, k + 1)]
        factors += [{(1, 0): Fraction(1), (0, 1): -ratio, (0, 0): Fraction(-a)} for a in range(1, n - k)]
        term = _bi_prod(factors)
        for key, c in term.items():
            rhs[key] = rhs.get(key, 0) + math.comb(n, k) * c
    rhs = {k: c for k, c in rhs.items() if c}
    return lhs, rhs


def check_divided_difference(nmax: int = 6) -> list:
    failures = []
    for n in range(nmax + 1):
        lhs, rhs = divided_difference_sides(n)
        if lhs != rhs:
            failures.append(n)
    return failures


STIRLING_CHECKS = {
    "stirling-recurrence": lambda: check_recurrence(14),
    "stirling-second-exp": check_second_exp,
    "stirling-first-log": check_first_log,
    "stirling-duality": check_duality,
    "shifted-factorial": check_shifted_factorial,
    "binom-power-sum": check_binom_power_sum,
    "stirling-first-harmonic": check_first_harmonic,
}

POWER_SUM_CHECKS = {
    "power-sum-stirling": check_power_sum_stirling,
    "divided-difference": check_divided_difference,
}
