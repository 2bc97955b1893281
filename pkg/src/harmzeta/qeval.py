"""Floating-point evaluation of Z_q, its residue-restricted variant and the q-series identities.

Nested sums over 0 < m_1 < ... < m_r are computed by a cumulative-sum
recursion over m, so depth costs a factor r instead of an r-fold loop.  The
cut-off M is doubled until the contribution of the last half (M/2, M] falls
below ``tol * 1e-3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebra import B, AlgebraElement, circ_power, concat_power, make_e, make_phi
from .identities import arcsin_power_coefficients
from .report import MISMATCH, VERIFIED, VerificationReport, combine
from .stirling import c_coeff

SAFETY = 1e-3
MAX_INDEX = 1 << 20

ANCHORS = {
    "bachmann": "1 + sum_r A_r(q) X^2r = exp(2 sum_k (-1)^(k-1)/(2k)! G_2k(q) (2 arcsin(X/2))^2k)",
    "kms": "1 + sum_r A_{S,N,eps,r}(q) X^2r = exp(2 sum_k (-1)^(k-1)/(2k)! G_{S,N,eps,2k}(q) (2 arcsin(X/2))^2k)",
    "phik-g": "Z_q(h^-k phi_k) = G_k(q)",
    "solvable-q": "1 + sum_r (-1)^(((N-1)L-1)r) A_r^(N,L)(q) X^r = exp(N/((N-1)L) sum_n X^n/(n^2 binom(NLn,Ln)) sum_k C_{k-2}(Ln,(N-1)Ln) G_k(q))",
}


@dataclass(frozen=True)
class QContext:
    """q in (0, 1) plus the residue data (N, S, sign); N=1, S={0}, sign=+1 is plain Z_q."""

    q: float
    tol: float = 1e-8
    N: int = 1
    S: frozenset = field(default_factory=lambda: frozenset({0}))
    sign: int = 1
    max_index: int = MAX_INDEX

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError("q must lie in (0, 1)")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        S = frozenset(int(s) % self.N for s in self.S)
        if not S:
            raise ValueError("S must be nonempty")
        object.__setattr__(self, "S", S)
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def hbar(self) -> float:
        return 1.0 - self.q

    def plain(self) -> "QContext":
        return QContext(self.q, self.tol, max_index=self.max_index)

    def allowed(self, M: int) -> np.ndarray:
        m = np.arange(1, M + 1)
        if self.N == 1:
            return m
        return m[np.isin(m % self.N, sorted(self.S))]

    def min_index(self) -> int:
        # q^M below the tail target, so an all-zero window cannot stop the search early
        return max(64, int(math.ceil(math.log(self.tol * SAFETY) / math.log(self.q))) + self.N)


WeightFn = Callable[[np.ndarray], np.ndarray]


def nested_sum(weights: list[WeightFn], ctx: QContext) -> tuple[float, float]:
    """sum over 0 < m_1 < ... < m_r (all m_a allowed by ctx) of prod_a weights[a](m_a).

    Returns ``(value, tail_estimate)``.
    """
    if not weights:
        return 1.0, 0.0
    M = ctx.min_index()
    while True:
        m = ctx.allowed(M)
        f = weights[0](m)
        for w in weights[1:]:
            before = np.concatenate(([0.0], np.cumsum(f)[:-1]))
            f = w(m) * before
        tail = abs(float(f[m > M // 2].sum()))
        if tail < ctx.tol * SAFETY:
            return math.fsum(f), tail
        M *= 2
        if M > ctx.max_index:
            raise RuntimeError(f"tail bound {ctx.tol * SAFETY:g} not reached below index {ctx.max_index}")


def letter_weight(letter: int, ctx: QContext) -> WeightFn:
    if letter == B:
        return lambda m: np.full(m.shape, ctx.hbar)

    def weight(m: np.ndarray) -> np.ndarray:
        x = ctx.sign * ctx.q ** m.astype(float)
        return (ctx.hbar * x / (1.0 - x)) ** letter

    return weight


def z_q(w: AlgebraElement, ctx: QContext) -> float:
    """Z_q (or its restricted variant) of an admissible element, with h -> 1 - q."""
    if not w.is_in_H0():
        raise ValueError("element is not admissible: a word ends in e1 - g1")
    total = []
    for word, coeff in w.terms().items():
        c = coeff.evaluate(ctx.hbar)
        if c:
            value, _ = nested_sum([letter_weight(u, ctx) for u in word], ctx)
            total.append(c * value)
    return math.fsum(total)


def divisor_series(coeff: Callable[[int], np.ndarray], ctx: QContext) -> float:
    """sum_n c_n q^n where ``coeff(n_max)`` returns c_1..c_{n_max}."""
    n_max = ctx.min_index()
    while True:
        c = coeff(n_max)
        n = np.arange(1, n_max + 1)
        terms = c * ctx.q ** n.astype(float)
        tail = abs(float(terms[n_max // 2:].sum()))
        if tail < ctx.tol * SAFETY:
            return math.fsum(terms)
        n_max *= 2
        if n_max > ctx.max_index:
            raise RuntimeError("divisor series did not converge")


def _restricted_divisor_coeffs(k: int, ctx: QContext) -> Callable[[int], np.ndarray]:
    def coeff(n_max: int) -> np.ndarray:
        c = np.zeros(n_max + 1)
        for d in range(1, n_max + 1):
            m = np.arange(1, n_max // d + 1)
            if ctx.N > 1:
                m = m[np.isin(m % ctx.N, sorted(ctx.S))]
            c[d * m] += float(ctx.sign) ** d * float(d) ** (k - 1)
        return c[1:]

    return coeff


def g_k_q(k: int, ctx: QContext) -> float:
    """G_k(q) = sum_n (sum_{d | n, n/d in S} sign^d d^(k-1)) q^n, by divisor sums."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return divisor_series(_restricted_divisor_coeffs(k, ctx), ctx)


def a_r_q(r: int, ctx: QContext) -> float:
    """A_r(q) or its restricted variant, summed directly from its definition."""
    if r < 1:
        raise ValueError("r must be >= 1")

    def weight(m):
        x = ctx.sign * ctx.q ** m.astype(float)
        return x / (1.0 - x) ** 2

    return nested_sum([weight] * r, ctx)[0]


def a_r_NL_q(N: int, L: int, r: int, ctx: QContext) -> float:
    """A_r^(N,L)(q): nested sum of (q^((N-1)m) / (1-q^m)^N)^L over all m."""
    if N < 2 or L < 1 or r < 1:
        raise ValueError("need N >= 2, L >= 1 and r >= 1")
    plain = ctx.plain()

    def weight(m):
        x = plain.q ** m.astype(float)
        return (x ** (N - 1) / (1.0 - x) ** N) ** L

    return nested_sum([weight] * r, plain)[0]


def kms_series(ctx: QContext, r: int | None = None, k: int | None = None) -> float:
    """A_{S,N,sign,r}(q) when ``r`` is given, G_{S,N,sign,k}(q) when ``k`` is given."""
    if (r is None) == (k is None):
        raise ValueError("give exactly one of r and k")
    return a_r_q(r, ctx) if r is not None else g_k_q(k, ctx)


def float_series_exp(f: np.ndarray) -> np.ndarray:
    """exp of a float power series with zero constant term (same recurrence as the exact one)."""
    if f[0] != 0:
        raise ValueError("exp needs a series with zero constant term")
    g = np.zeros(len(f))
    g[0] = 1.0
    for n in range(1, len(f)):
        k = np.arange(1, n + 1)
        g[n] = float(np.dot(k * f[1 : n + 1], g[n - 1 :: -1][:n])) / n
    return g


def _numeric_part(identity: str, params: dict, lhs: float, rhs: float, tol: float) -> VerificationReport:
    err = abs(lhs - rhs)
    return VerificationReport(
        identity, params, None, VERIFIED if err <= tol else MISMATCH,
        value=lhs, reference=rhs, abs_err=err,
        first_mismatch=None if err <= tol else {"abs_err": err, "tol": tol},
    )


def bachmann_rhs(ctx: QContext, r_max: int) -> np.ndarray:
    """Coefficients of the exponential side in X (degree 0..2 r_max)."""
    order = 2 * r_max
    expo = np.zeros(order + 1)
    for k in range(1, r_max + 1):
        g = g_k_q(2 * k, ctx)
        series = arcsin_power_coefficients(k, order)
        scale = 2.0 * (-1) ** (k - 1) / math.factorial(2 * k) * g
        expo += scale * np.array([float(series[n]) for n in range(order + 1)])
    return float_series_exp(expo)


def solvable_q_rhs(N: int, L: int, r_max: int, ctx: QContext) -> np.ndarray:
    plain = ctx.plain()
    NL = N * L
    gs = {k: g_k_q(k, plain) for k in range(2, NL * r_max + 1)}
    expo = np.zeros(r_max + 1)
    for n in range(1, r_max + 1):
        ln, rest = L * n, (N - 1) * L * n
        inner = math.fsum(float(c_coeff(k - 2, ln, rest)) * gs[k] for k in range(2, NL * n + 1))
        expo[n] = float(Fraction(N, (N - 1) * L * n * n * math.comb(NL * n, ln))) * inner
    return float_series_exp(expo)


def verify_numeric_identity(name: str, ctx: QContext, order: int, tol: float | None = None, N: int = 2, L: int = 1,
                            perturb: float = 0.0) -> VerificationReport:
    """Compare both sides of a q-series identity coefficientwise.

    ``order`` is r_max for bachmann/kms/solvable-q and k_max for phik-g.
    ``perturb`` is added to the last left-hand coefficient (negative control).
    """
    if name not in ANCHORS:
        raise ValueError(f"unknown identity {name!r}; expected one of {sorted(ANCHORS)}")
    if order < 1:
        raise ValueError("order must be >= 1")
    tol = ctx.tol if tol is None else tol
    parts = []
    if name in ("bachmann", "kms"):
        c = ctx.plain() if name == "bachmann" else ctx
        rhs = bachmann_rhs(c, order)
        for r in range(1, order + 1):
            lhs = a_r_q(r, c) + (perturb if r == order else 0.0)
            params = {"r": r}
            parts.append(_numeric_part(f"{name}-coefficient", params, lhs, float(rhs[2 * r]), tol))
            word = concat_power(make_e(2), r).h_shift(-2 * r)
            parts.append(_numeric_part("A_r-word", params, a_r_q(r, c), z_q(word, c), tol))
        params = _ctx_params(c)
    elif name == "phik-g":
        for k in range(1, order + 1):
            lhs = z_q(make_phi(k).h_shift(-k), ctx) + (perturb if k == order else 0.0)
            parts.append(_numeric_part(name, {"k": k}, lhs, g_k_q(k, ctx), tol))
        params = _ctx_params(ctx)
    else:
        if N < 2 or L < 1:
            raise ValueError("need N >= 2 and L >= 1")
        rhs = solvable_q_rhs(N, L, order, ctx)
        sign = (-1) ** ((N - 1) * L - 1)
        for r in range(1, order + 1):
            lhs = sign**r * a_r_NL_q(N, L, r, ctx) + (perturb if r == order else 0.0)
            parts.append(_numeric_part(f"{name}-coefficient", {"r": r}, lhs, float(rhs[r]), tol))
            word = concat_power(circ_power(make_e(N), L).h_shift(-N * L), r)
            parts.append(_numeric_part("A_r^(N,L)-word", {"r": r}, a_r_NL_q(N, L, r, ctx), z_q(word, ctx.plain()), tol))
        params = {"q": ctx.q, "N": N, "L": L}
    params = {**params, "tol": tol}
    return combine(name, params, order, parts, ANCHORS[name])


def _ctx_params(ctx: QContext) -> dict:
    params = {"q": ctx.q}
    if ctx.N != 1 or ctx.sign != 1:
        params.update(N=ctx.N, S=sorted(ctx.S), sign=ctx.sign)
    return params
