"""Numerical omega side: contour integrals along -eps + iR, integer closed forms, lattice sums.

All integrals run upward along t = -eps + iy (dt = i dy).  For real omega > 0
the integrands decay like exp(-2 pi omega y) as y -> +inf and exp(-2 pi |y|)
as y -> -inf, which fixes the truncation window; the window is then covered by
composite Gauss-Legendre panels whose number is doubled until two successive
estimates agree to tol/10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .algebra import B, AlgebraElement, make_phi
from .exact import arcsin_coefficients, sin_coefficients
from .identities import bernoulli_omega
from .report import MISMATCH, VERIFIED, VerificationReport, combine
from .stirling import bernoulli, stirling2, zeta_even

TWO_PI_I = 2j * math.pi
NODES = 16
MAX_PANELS = 1 << 14

ANCHORS = {
    "g-closed": "G_k(omega) = (k-1)!/(2 pi i)^k zeta(k)(omega^-k - 1) - delta_k2/(4 pi i omega) (even k), lattice sum (odd k)",
    "g-series": "G_s(omega) = (2 pi)^-s Gamma(s)(e^{-s pi i/2} sum_{m>=0,n>=1} - e^{s pi i/2} sum_{m>=1,n>=0}) (m + n omega)^-s",
    "three-term": "G_s(omega) = G_s(omega+1) + (omega+1)^-s G_s(omega/(omega+1))",
    "duality": "Z_omega(b^alpha g_{beta+1}) = Z_omega(b^beta g_{alpha+1})",
    "z-e2": "Z_omega(e_2) = zeta(2)(1 - omega^2) - pi i omega",
    "phik-g-omega": "Z_omega(h^-k phi_k) = G_k(omega)",
    "omega-gen": "1 + sum_r (-1)^((L-1)r) Z_omega((e_2^{oL})^r) X^r = exp(L sum_n X^n (...))",
    "omega-limit": "Z_omega(e_2^r) -> pi^2r/(2r+1)! as omega -> 0",
}


@dataclass(frozen=True)
class OmegaContext:
    omega: float
    epsilon: float | None = None
    tol: float = 1e-8
    max_panels: int = MAX_PANELS

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        bound = min(1.0, 1.0 / self.omega)
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", bound / 2)
        elif not 0 < self.epsilon < bound:
            raise ValueError("epsilon must lie in (0, min(1, 1/omega))")

    def with_omega(self, omega: float) -> "OmegaContext":
        """Same tolerance at another omega (default offset for that omega)."""
        return OmegaContext(omega, None, self.tol, self.max_panels)


# ---------------------------------------------------------------------------
# quadrature


def _cutoff(rate: float, growth: float, target: float) -> float:
    # smallest y (roughly) with (1 + y)^growth exp(-rate y) < target
    y = math.log(1 / target) / rate
    for _ in range(50):
        y_new = (math.log(1 / target) + max(growth, 0.0) * math.log1p(y)) / rate
        if abs(y_new - y) < 1e-9:
            break
        y = y_new
    return y + 1.0


def line_integral(f: Callable[[np.ndarray], np.ndarray], eps: float, rate_up: float, rate_down: float,
                  growth: float, tol: float, max_panels: int = MAX_PANELS) -> tuple[complex, float]:
    """Integral of f(t) dt upward along t = -eps + iy; returns (value, change between last refinements)."""
    target = tol * 1e-3
    top = _cutoff(rate_up, growth, target)
    bottom = -_cutoff(rate_down, growth, target)
    x, w = np.polynomial.legendre.leggauss(NODES)
    panels = 16
    previous = None
    while panels <= max_panels:
        edges = np.linspace(bottom, top, panels + 1)
        half = (edges[1:] - edges[:-1])[:, None] / 2
        mid = (edges[1:] + edges[:-1])[:, None] / 2
        y = (mid + half * x[None, :]).ravel()
        weights = (half * w[None, :]).ravel()
        value = complex(1j * np.sum(weights * f(-eps + 1j * y)))
        if previous is not None and abs(value - previous) < tol / 10:
            return value, abs(value - previous)
        previous = value
        panels *= 2
    raise RuntimeError(f"quadrature did not reach tolerance {tol:g} within {max_panels} panels")


def _principal_power(z: np.ndarray, a: complex) -> np.ndarray:
    return np.exp(a * np.log(z))


def g_s_omega_integral(s: complex, ctx: OmegaContext, epsilon: float | None = None) -> complex:
    """G_s(omega) by quadrature; principal branch of (-t)^(s-1), Re(-t) > 0 on the line."""
    eps = ctx.epsilon if epsilon is None else epsilon
    if not 0 < eps < min(1.0, 1.0 / ctx.omega):
        raise ValueError("epsilon must lie in (0, min(1, 1/omega))")
    s = complex(s)
    om = ctx.omega

    def integrand(t):
        return _principal_power(-t, s - 1) / (np.expm1(TWO_PI_I * t) * np.expm1(-TWO_PI_I * om * t))

    growth = s.real - 1 + abs(s.imag) * math.pi / 2
    value, _ = line_integral(integrand, eps, 2 * math.pi * om, 2 * math.pi, growth, ctx.tol, ctx.max_panels)
    return value


def z_omega_depth1(alpha: int, beta: int, ctx: OmegaContext, epsilon: float | None = None) -> complex:
    """Z_omega(b^alpha g_{beta+1}) by one-dimensional quadrature."""
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    eps = ctx.epsilon if epsilon is None else epsilon
    om = ctx.omega
    c = TWO_PI_I * om

    def integrand(t):
        binom = np.ones_like(t)
        for a in range(1, alpha + 1):
            binom = binom * (t + a) / a
        x = np.exp(c * t)
        return (-c) ** alpha * binom * (c * x / (1 - x)) ** (beta + 1) / np.expm1(TWO_PI_I * t)

    value, _ = line_integral(integrand, eps, 2 * math.pi * om * (beta + 1), 2 * math.pi, alpha, ctx.tol, ctx.max_panels)
    return value


def z_omega(w: AlgebraElement, ctx: OmegaContext) -> complex:
    """Z_omega on elements whose words are b^alpha g_k (h -> 2 pi i omega)."""
    total = 0j
    hbar = TWO_PI_I * ctx.omega
    for word, coeff in w.terms().items():
        if not word:
            total += coeff.evaluate(hbar)
            continue
        *head, last = word
        if last == B or any(u != B for u in head):
            raise ValueError("only words b^alpha g_k (one g letter, at the end) are supported")
        total += coeff.evaluate(hbar) * z_omega_depth1(len(head), last - 1, ctx)
    return total


# ---------------------------------------------------------------------------
# closed forms and lattice sums


def _hurwitz_tail(s: float, omega: float, start: int, terms: int = 8) -> float:
    """sum_{n>=start} zeta(s, n omega) from the Euler-Maclaurin expansion of zeta(s, a) at large a."""
    total = omega ** (1 - s) / (s - 1) * special.zeta(s - 1, start)
    total += omega ** (-s) / 2 * special.zeta(s, start)
    rising = s
    for j in range(1, terms + 1):
        if j > 1:
            rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
        p = s + 2 * j - 1
        total += float(bernoulli(2 * j)) / math.factorial(2 * j) * rising * omega ** (-p) * special.zeta(p, start)
    return total


def lattice_sum(s: float, omega: float, tol: float = 1e-12) -> tuple[float, float]:
    """sum_{m>=0, n>=1} (m + n omega)^-s for real s > 2, as sum_n zeta(s, n omega).

    The first n_max terms use the Hurwitz zeta function, the rest the
    Euler-Maclaurin tail; n_max doubles until two estimates agree to ``tol``.
    Returns (value, change between the last two estimates).
    """
    if not s > 2:
        raise ValueError("lattice sums need real s > 2")
    n_max = max(16, int(math.ceil(8 / omega)))
    previous = None
    while True:
        n = np.arange(1, n_max + 1)
        head = math.fsum(special.zeta(s, n * omega))
        value = head + _hurwitz_tail(s, omega, n_max + 1)
        if previous is not None and abs(value - previous) <= tol * max(1.0, abs(value)):
            return value, abs(value - previous)
        previous = value
        n_max *= 2
        if n_max > 1 << 22:
            raise RuntimeError("lattice sum did not converge")


def lattice_pair(s: float, omega: float, tol: float = 1e-12) -> tuple[float, float]:
    """(sum_{m>=0,n>=1}, sum_{m>=1,n>=0}) of (m + n omega)^-s.

    The second sum is zeta(s) + sum_n zeta(s, n omega + 1), and
    zeta(s, a + 1) = zeta(s, a) - a^-s turns it into the first plus zeta(s)(1 - omega^-s).
    """
    a, _ = lattice_sum(s, omega, tol)
    return a, a + float(special.zeta(s)) * (1 - omega ** (-s))


def g_k_omega_closed(k: int, ctx: OmegaContext) -> complex:
    if k < 2:
        raise ValueError("k must be >= 2")
    om = ctx.omega
    pref = math.factorial(k - 1) / TWO_PI_I**k
    if k % 2 == 0:
        zeta = float(zeta_even(k)) * math.pi**k
        value = pref * zeta * (om ** (-k) - 1)
        if k == 2:
            value -= 1 / (4j * math.pi * om)
        return value
    a, b = lattice_pair(k, om, ctx.tol * 1e-3)
    return pref * (a + b)


def g_series(s: float, ctx: OmegaContext) -> complex:
    """(2 pi)^-s Gamma(s) (e^{-s pi i/2} A - e^{s pi i/2} B) for real s > 2."""
    a, b = lattice_pair(s, ctx.omega, ctx.tol * 1e-3)
    return (2 * math.pi) ** (-s) * math.gamma(s) * (np.exp(-0.5j * s * math.pi) * a - np.exp(0.5j * s * math.pi) * b)


def three_term_residual(s: complex, ctx: OmegaContext) -> float:
    om = ctx.omega
    left = g_s_omega_integral(s, ctx)
    right = g_s_omega_integral(s, ctx.with_omega(om + 1))
    inner = g_s_omega_integral(s, ctx.with_omega(om / (om + 1)))
    return abs(left - right - (om + 1) ** (-complex(s)) * inner)


def phi_k_omega(k: int, ctx: OmegaContext) -> complex:
    """Z_omega(h^-k phi_k) assembled from depth-one values (the g_j rewritten by duality)."""
    om = TWO_PI_I * ctx.omega
    return sum(
        math.factorial(j - 1) * stirling2(k, j) * om ** (-j) * z_omega_depth1(j - 1, 0, ctx)
        for j in range(1, k + 1)
    )


# ---------------------------------------------------------------------------
# generating series for Z_omega((e_2^{oL})^r)


def complex_series_exp(f: np.ndarray) -> np.ndarray:
    if f[0] != 0:
        raise ValueError("exp needs a series with zero constant term")
    g = np.zeros(len(f), dtype=complex)
    g[0] = 1
    for n in range(1, len(f)):
        k = np.arange(1, n + 1)
        g[n] = np.dot(k * f[1 : n + 1], g[n - 1 :: -1][:n]) / n
    return g


def _complex_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def generating_exponent(L: int, r_max: int, omega: float) -> np.ndarray:
    """Exponent coefficients (degree 0..r_max) of the closed exponential form.

    The first term uses 1/(2 pi i omega); this is the k=1 part of
    -arcsin(pi i omega X)^2/(pi i omega) rewritten by the arcsin expansion.
    """
    polys = bernoulli_omega(L * r_max)
    out = np.zeros(r_max + 1, dtype=complex)
    for n in range(1, r_max + 1):
        m = L * n
        # (2 pi i omega)^(2m) / (2 pi i omega) without dividing by a small omega
        first = -(TWO_PI_I ** (2 * m - 1)) * omega ** (2 * m - 1) / (m * m * math.comb(2 * m, m))
        b = _eval_poly(polys[m - 1], omega)
        second = b / math.factorial(2 * m) * (2 * math.pi) ** (2 * m) / (2 * m)
        out[n] = L * (first + second)
    return out


def _eval_poly(poly, x: float) -> float:
    return math.fsum(float(c) * x**i for i, c in enumerate(poly))


def omega_generating_series(L: int, r_max: int, ctx: OmegaContext, form: str = "bernoulli") -> list[complex]:
    """Z_omega((e_2^{oL})^r) for r = 1..r_max.

    ``form="bernoulli"``: exponential of the Bernoulli form (any L).
    ``form="arcsin"``: sin(omega^-1 arcsin(pi i omega X))/(pi i X) exp(-arcsin^2(pi i omega X)/(pi i omega)), L = 1.
    """
    if L < 1 or r_max < 1:
        raise ValueError("need L >= 1 and r_max >= 1")
    om = ctx.omega
    if form == "bernoulli":
        coeffs = complex_series_exp(generating_exponent(L, r_max, om))
        return [(-1) ** ((L - 1) * r) * coeffs[r] for r in range(1, r_max + 1)]
    if form != "arcsin":
        raise ValueError("form must be 'bernoulli' or 'arcsin'")
    if L != 1:
        raise ValueError("the sin-arcsin form covers L = 1 only")
    order = 2 * r_max + 1
    asin = arcsin_coefficients(order)
    pi_i = 1j * math.pi
    # u = omega^-1 arcsin(pi i omega X), v = arcsin(pi i omega X)/(pi i omega)
    u = np.zeros(order + 1, dtype=complex)
    v = np.zeros(order + 1, dtype=complex)
    for n, c in enumerate(asin):
        if c:
            u[n] = float(c) * pi_i**n * om ** (n - 1)
            v[n] = float(c) * pi_i ** (n - 1) * om ** (n - 1)
    sin_u = np.zeros(order + 1, dtype=complex)
    power = np.zeros(order + 1, dtype=complex)
    power[0] = 1
    for n, c in enumerate(sin_coefficients(order)):
        if c:
            sin_u += float(c) * power
        power = _complex_mul(power, u)
    ratio = sin_u[1:] / pi_i  # divide by pi i X
    expo = -pi_i * om * _complex_mul(v, v)[: order]
    series = _complex_mul(ratio, complex_series_exp(expo))
    return [series[2 * r] for r in range(1, r_max + 1)]


# ---------------------------------------------------------------------------
# reports


def _numeric(identity: str, params: dict, value: complex, reference: complex, tol: float,
             relative: bool = False) -> VerificationReport:
    value, reference = complex(value), complex(reference)
    err = float(abs(value - reference))
    scaled = err / abs(reference) if relative else err
    ok = scaled <= tol
    return VerificationReport(
        identity, params, None, VERIFIED if ok else MISMATCH,
        value=[float(value.real), float(value.imag)],
        reference=[float(reference.real), float(reference.imag)],
        abs_err=err,
        first_mismatch=None if ok else {("rel_err" if relative else "abs_err"): scaled, "tol": tol},
    )


def verify_g_closed(ks, ctx: OmegaContext, tol: float) -> VerificationReport:
    parts = []
    for k in ks:
        parts.append(_numeric("g-closed", {"k": k, "omega": ctx.omega}, g_s_omega_integral(k, ctx), g_k_omega_closed(k, ctx), tol))
    return combine("g-closed", {"omega": ctx.omega, "k": list(ks)}, None, parts, ANCHORS["g-closed"])


def verify_g_series(s: float, ctx: OmegaContext, tol: float) -> VerificationReport:
    part = _numeric("g-series", {"s": s, "omega": ctx.omega}, g_s_omega_integral(s, ctx), g_series(s, ctx), tol)
    part.anchor = ANCHORS["g-series"]
    return part


def verify_three_term(s: float, ctx: OmegaContext, tol: float) -> VerificationReport:
    residual = three_term_residual(s, ctx)
    ok = residual < tol
    return VerificationReport(
        "three-term", {"s": s, "omega": ctx.omega}, None, VERIFIED if ok else MISMATCH, ANCHORS["three-term"],
        first_mismatch=None if ok else {"residual": residual, "tol": tol}, value=float(residual), abs_err=float(residual),
    )


def verify_contour_independence(s: float, ctx: OmegaContext, tol: float) -> VerificationReport:
    a = g_s_omega_integral(s, ctx)
    b = g_s_omega_integral(s, ctx, epsilon=ctx.epsilon / 2)
    return _numeric("contour-offset", {"s": s, "omega": ctx.omega, "epsilon": ctx.epsilon}, a, b, tol)


def verify_duality(pairs, ctx: OmegaContext, tol: float) -> VerificationReport:
    parts = []
    for alpha, beta in pairs:
        parts.append(
            _numeric("duality", {"alpha": alpha, "beta": beta, "omega": ctx.omega},
                     z_omega_depth1(alpha, beta, ctx), z_omega_depth1(beta, alpha, ctx), tol)
        )
    return combine("duality", {"omega": ctx.omega, "pairs": [list(p) for p in pairs]}, None, parts, ANCHORS["duality"])


def z_e2_reference(omega: float) -> complex:
    return math.pi**2 / 6 * (1 - omega**2) - 1j * math.pi * omega


def verify_z_e2(ctx: OmegaContext, tol: float) -> VerificationReport:
    """Z_omega(e_2) from quadrature against (2 pi i omega)^2 G_2(omega) in closed form."""
    from .algebra import make_e

    value = z_omega(make_e(2), ctx)
    reference = (TWO_PI_I * ctx.omega) ** 2 * g_k_omega_closed(2, ctx)
    part = _numeric("z-e2", {"omega": ctx.omega}, value, reference, tol)
    part.anchor = ANCHORS["z-e2"]
    return part


def verify_phik_g_omega(k: int, ctx: OmegaContext, tol: float) -> VerificationReport:
    value = z_omega(make_phi(k).h_shift(-k), ctx)
    part = _numeric("phik-g-omega", {"k": k, "omega": ctx.omega}, value, g_s_omega_integral(k, ctx), tol)
    part.anchor = ANCHORS["phik-g-omega"]
    return part


def verify_omega_gen(L: int, r_max: int, ctx: OmegaContext, tol: float) -> VerificationReport:
    """The two closed forms agree (L = 1), and the r = 1 value matches quadrature of Z_omega(e_2^{oL})."""
    from .algebra import circ_power, make_e

    bernoulli_form = omega_generating_series(L, r_max, ctx, "bernoulli")
    parts = []
    if L == 1:
        arcsin_form = omega_generating_series(1, r_max, ctx, "arcsin")
        for r in range(1, r_max + 1):
            parts.append(_numeric("omega-gen-forms", {"r": r}, bernoulli_form[r - 1], arcsin_form[r - 1], tol))
    quad = z_omega(circ_power(make_e(2), L), ctx)
    parts.append(_numeric("omega-gen-quadrature", {"r": 1}, bernoulli_form[0], quad, max(tol, 1e-6)))
    return combine("omega-gen", {"L": L, "omega": ctx.omega, "rmax": r_max}, r_max, parts, ANCHORS["omega-gen"])


def verify_omega_limit(r_max: int, omega: float, tol: float) -> VerificationReport:
    """Z_omega(e_2^r) at small omega against zeta(2,...,2) = pi^2r/(2r+1)!, relative error."""
    values = omega_generating_series(1, r_max, OmegaContext(omega), "arcsin")
    parts = [
        _numeric("omega-limit", {"r": r, "omega": omega}, values[r - 1],
                 math.pi ** (2 * r) / math.factorial(2 * r + 1), tol, relative=True)
        for r in range(1, r_max + 1)
    ]
    return combine("omega-limit", {"omega": omega, "rmax": r_max}, r_max, parts, ANCHORS["omega-limit"])
