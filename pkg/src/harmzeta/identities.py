"""Exact construction and comparison of both sides of the generating-series identities.

The root function alpha never appears explicitly.  Everything it contributes
enters through the power sums p_s = sum_m alpha(eps^m X)^s, which are read off
the expansion of

    L X^{NL} P'(z) P(z)^{L-1} / (1 - X^{NL} P(z)^L) = sum_s z^{s-1} p_s(X).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import AlgebraElement, circ_power, make_e, make_phi, psi
from .exact import (
    RatSeries,
    arcsin_coefficients,
    compose,
    multisection,
    poly_add,
    poly_mul,
    poly_text,
    poly_scale,
    poly_trim,
    rat_series_exp,
    rat_series_log1p,
    sin_coefficients,
)
from .report import MISMATCH, VERIFIED, VerificationReport, combine
from .series import AlgSeries, exp_star, geometric_inverse
from .stirling import (
    POWER_SUM_CHECKS,
    bernoulli,
    c_coeff,
    harmonic2,
    stirling1,
)

PhiFactory = Callable[[int], AlgebraElement]

ANCHORS = {
    "main-identity": "1/(1+psi_P^{oL} X^{NL}) = exp_*(-sum_k h^-k phi_k/k! sum_m Log(1-alpha(eps^m X))^k)",
    "solvable-case": "1/(1+h^{-NL} e_N^{oL} X^{NL}) = exp_*(-sum_k h^-k phi_k/k! sum_m varphi(1/N; eps^m X)^k)",
    "solvable-explicit": "exponent = N/((N-1)L) sum_n X^n/(n^2 binom(NLn,Ln)) sum_k C_{k-2}(Ln,(N-1)Ln) h^-k phi_k",
    "bachmann-exact": "1/(1-h^-2 e_2 X^2) = exp_*(2 sum_k (-1)^(k-1)/(2k)! h^-2k phi_2k (2 arcsin(X/2))^2k)",
    "varphi-rel": "exp(varphi) - x exp(theta varphi) = 1",
    "varphi-power": "varphi^k/k! = sum_n x^n/n! sum_j (-1)^(n-j) [n j] binom(j-1,k-1) (n theta)^(j-k)",
    "exp-strange": "exp(lambda varphi) = 1 + lambda sum_n x^n/n! prod_a (lambda + n theta - a)",
}


# ---------------------------------------------------------------------------
# polynomials P with P(0) = P(1) = 0


@dataclass(frozen=True)
class PolynomialSpec:
    """P(z) = sum_{j=1}^{N} c_j z^j with P(1) = 0 and N >= 2."""

    coefficients: tuple  # c_1 .. c_N

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", cs)
        if not cs or not cs[-1]:
            raise ValueError("leading coefficient must be nonzero")
        if len(cs) < 2:
            raise ValueError("deg P >= 2 violated")
        if sum(cs) != 0:
            raise ValueError("P(1)=0 violated")

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def as_dict(self) -> dict[int, Fraction]:
        return {j + 1: c for j, c in enumerate(self.coefficients) if c}

    def dense(self) -> list[Fraction]:
        """Coefficients c_0..c_N (c_0 = 0)."""
        return [Fraction(0), *self.coefficients]

    def psi(self) -> AlgebraElement:
        return psi(self.as_dict())

    def to_text(self) -> str:
        parts = []
        for j in range(self.degree, 0, -1):
            c = self.coefficients[j - 1]
            if not c:
                continue
            mono = "z" if j == 1 else f"z^{j}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    @classmethod
    def solvable(cls, n: int) -> "PolynomialSpec":
        """z^(N-1) (z - 1)."""
        cs = [Fraction(0)] * n
        cs[n - 1] = Fraction(1)
        cs[n - 2] = Fraction(-1)
        return cls(tuple(cs))


_POLY_TERM = re.compile(r"^(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?(?P<z>z(?:\s*\^\s*(?P<exp>\d+))?)?$")


def parse_polynomial(text: str) -> PolynomialSpec:
    """Parse signed terms ``c*z^k``, ``z``, ``z^k`` or constants; validate membership.

    Raises ``ValueError`` naming the violated condition ("P(0)=0 violated",
    "P(1)=0 violated", ...).
    """
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty polynomial")
    if src[0] not in "+-":
        src = "+" + src
    pieces = re.split(r"([+-])", src)[1:]
    coeffs: dict[int, Fraction] = {}
    for sign, term in zip(pieces[0::2], pieces[1::2]):
        m = _POLY_TERM.match(term)
        if not term or not m or (m.group("coef") is None and m.group("z") is None):
            raise ValueError(f"cannot parse polynomial term {term!r}")
        c = Fraction(m.group("coef") or 1) * (-1 if sign == "-" else 1)
        k = 0 if m.group("z") is None else int(m.group("exp") or 1)
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
    if coeffs.get(0, 0) != 0:
        raise ValueError("P(0)=0 violated")
    if sum(coeffs.values()) != 0:
        raise ValueError("P(1)=0 violated")
    degree = max((k for k, c in coeffs.items() if c), default=0)
    if degree == 0:
        raise ValueError("P must be nonzero")
    return PolynomialSpec(tuple(coeffs.get(j, Fraction(0)) for j in range(1, degree + 1)))


def _zpoly_mul(a: Sequence[Fraction], b: Sequence[Fraction], cap: int) -> list[Fraction]:
    out = [Fraction(0)] * min(len(a) + len(b) - 1, cap + 1)
    for i, x in enumerate(a):
        if not x or i > cap:
            continue
        for j, y in enumerate(b):
            if i + j > cap:
                break
            out[i + j] += x * y
    return out


def _zpoly_pow(a: Sequence[Fraction], n: int, cap: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(n):
        out = _zpoly_mul(out, a, cap)
    return out


# ---------------------------------------------------------------------------
# power sums of the roots and the logarithmic part


@dataclass
class AlphaPowerSums:
    P: PolynomialSpec
    L: int
    order: int
    p: dict  # s -> RatSeries in X

    @property
    def N(self) -> int:
        return self.P.degree

    @property
    def s_max(self) -> int:
        return max(self.p, default=0)


def alpha_power_sums(P: PolynomialSpec, L: int, s_max: int, order: int) -> AlphaPowerSums:
    """Read p_1..p_{s_max} off the bivariate expansion in z (degree < s_max) and X."""
    if L < 1 or order < 1 or s_max < 1:
        raise ValueError("need L >= 1, s_max >= 1 and order >= 1")
    N = P.degree
    cap = s_max - 1
    dense = P.dense()
    deriv = [j * dense[j] for j in range(1, len(dense))]
    pl = _zpoly_pow(dense, L, cap)
    head = [L * c for c in _zpoly_mul(deriv, _zpoly_pow(dense, L - 1, cap), cap)]
    # bivariate[zdeg][xdeg]
    biv = [[Fraction(0)] * (order + 1) for _ in range(cap + 1)]
    term = head
    j = 0
    while N * L * (j + 1) <= order:
        xdeg = N * L * (j + 1)
        for zdeg, c in enumerate(term):
            if zdeg <= cap and c:
                biv[zdeg][xdeg] += c
        term = _zpoly_mul(term, pl, cap)
        j += 1
    p = {s: RatSeries.from_rationals(biv[s - 1], order) for s in range(1, s_max + 1)}
    return AlphaPowerSums(P, L, order, p)


def log_sum_powers(a: AlphaPowerSums, k: int, order: int) -> RatSeries:
    """sum_m Log(1 - alpha_m)^k = (-1)^k sum_{s>=k} k!/s! [s k] p_s."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if order > a.order:
        raise ValueError("requested order exceeds the power sums' order")
    if a.s_max < order:
        raise ValueError(f"insufficient s_max: need {order}, have {a.s_max}")
    out = RatSeries.zero(order)
    for s in range(k, order + 1):
        c = Fraction((-1) ** k * math.factorial(k) * stirling1(s, k), math.factorial(s))
        if c:
            out = out + a.p[s].truncate(order).scale(c)
    return out


def _exponent_from_logs(logs: dict[int, RatSeries], order: int, phi: PhiFactory) -> AlgSeries:
    cs = [AlgebraElement.zero()] * (order + 1)
    for k, s in logs.items():
        element = phi(k).h_shift(-k)
        scale = Fraction(-1, math.factorial(k))
        for n in range(order + 1):
            if s[n]:
                cs[n] = cs[n] + element.scale(scale * s[n])
    return AlgSeries(cs, order)


def main_exponent(P: PolynomialSpec, L: int, order: int, phi: PhiFactory = make_phi) -> AlgSeries:
    a = alpha_power_sums(P, L, order, order)
    NL = P.degree * L
    logs = {}
    for k in range(2, order + 1):
        s = log_sum_powers(a, k, order)
        low = max(k, NL)
        if any(s[n] for n in range(min(low, order + 1))):
            raise RuntimeError(f"log power {k} has terms below X^{low}: truncation bound violated")
        logs[k] = s
    return _exponent_from_logs(logs, order, phi)


def main_identity_sides(
    P: PolynomialSpec, L: int, order: int, phi: PhiFactory = make_phi
) -> tuple[AlgSeries, AlgSeries]:
    """Geometric side and exponential side of the general identity."""
    if L < 1:
        raise ValueError("L must be >= 1")
    NL = P.degree * L
    lhs = geometric_inverse(circ_power(P.psi(), L), NL, 1, order)
    rhs = exp_star(main_exponent(P, L, order, phi))
    return lhs, rhs


# ---------------------------------------------------------------------------
# comparison


def _render(x) -> str:
    if isinstance(x, AlgebraElement):
        return x.to_text()
    if isinstance(x, tuple):
        return poly_text(x, "theta")
    return str(x)


def compare_series(identity: str, params: dict, lhs, rhs, anchor: str = "") -> VerificationReport:
    """Exact coefficientwise comparison of two AlgSeries or two RatSeries."""
    order = min(lhs.order, rhs.order)
    for n in range(order + 1):
        a, b = lhs.coeffs[n], rhs.coeffs[n]
        if a != b:
            return VerificationReport(
                identity, params, order, MISMATCH, anchor,
                first_mismatch={"degree": n, "lhs": _render(a), "rhs": _render(b)},
            )
    return VerificationReport(identity, params, order, VERIFIED, anchor)


def _perturbed(series: AlgSeries, perturb) -> AlgSeries:
    if perturb is None:
        return series
    degree, delta = perturb
    if not isinstance(delta, AlgebraElement):
        delta = AlgebraElement.one().scale(delta)
    return series + AlgSeries.monomial(delta, degree, series.order)


def _perturbed_rat(series: RatSeries, perturb) -> RatSeries:
    if perturb is None:
        return series
    degree, delta = perturb
    cs = list(series.coeffs)
    cs[degree] = poly_add(cs[degree], (Fraction(delta),))
    return RatSeries(cs, series.order, series.param)


def verify_main_identity(
    P: PolynomialSpec, L: int, order: int, phi: PhiFactory = make_phi, perturb=None
) -> VerificationReport:
    """Exact check of the general identity for P and L up to X^order.

    ``phi`` replaces the phi_k factory and ``perturb = (degree, element)`` adds
    ``element`` to one coefficient of the exponential side; both exist for
    negative controls.
    """
    lhs, rhs = main_identity_sides(P, L, order, phi)
    params = {"P": P.to_text(), "L": L}
    return compare_series("main-identity", params, lhs, _perturbed(rhs, perturb), ANCHORS["main-identity"])


# ---------------------------------------------------------------------------
# the solvable case P = z^(N-1) (z - 1)


def varphi(theta, order: int) -> RatSeries:
    """sum_{k>=1} x^k/k! prod_{a=1}^{k-1} (k theta - a).

    ``theta=None`` keeps theta symbolic (coefficients are polynomials in theta).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    cs = [()]
    for k in range(1, order + 1):
        poly = (Fraction(1, math.factorial(k)),)
        for a in range(1, k):
            poly = poly_mul(poly, (Fraction(-a), Fraction(k)))
        cs.append(poly)
    series = RatSeries(cs, order, "theta")
    if theta is None:
        return series
    return series.substitute_param(Fraction(theta))


def solvable_exponent(N: int, L: int, order: int, phi: PhiFactory = make_phi) -> AlgSeries:
    """Exponent built from multisections of powers of varphi(1/N; X)."""
    base = varphi(Fraction(1, N), order)
    logs = {}
    power = base
    for k in range(1, order + 1):
        if k >= 2:
            logs[k] = multisection(power, N * L)
        power = power * base
    return _exponent_from_logs(logs, order, phi)


def explicit_exponent(N: int, L: int, order: int, phi: PhiFactory = make_phi) -> AlgSeries:
    """Exponent from the C-coefficient closed form, written in the variable X."""
    NL = N * L
    cs = [AlgebraElement.zero()] * (order + 1)
    n = 1
    while NL * n <= order:
        ln, rest = L * n, (N - 1) * L * n
        pref = Fraction(N * (-1) ** ((N - 1) * L * n), (N - 1) * L * n * n * math.comb(NL * n, ln))
        acc = AlgebraElement.zero()
        for k in range(2, NL * n + 1):
            c = c_coeff(k - 2, ln, rest)
            if c:
                acc = acc + phi(k).h_shift(-k).scale(c)
        cs[NL * n] = acc.scale(pref)
        n += 1
    return AlgSeries(cs, order)


def solvable_sides(N: int, L: int, order: int, phi: PhiFactory = make_phi) -> tuple[AlgSeries, AlgSeries]:
    u = circ_power(make_e(N), L).h_shift(-N * L)
    lhs = geometric_inverse(u, N * L, 1, order)
    rhs = exp_star(solvable_exponent(N, L, order, phi))
    return lhs, rhs


def verify_solvable_case(N: int, L: int, order: int, phi: PhiFactory = make_phi, perturb=None) -> VerificationReport:
    if N < 2 or L < 1:
        raise ValueError("need N >= 2 and L >= 1")
    params = {"N": N, "L": L}
    multi = solvable_exponent(N, L, order, phi)
    explicit = explicit_exponent(N, L, order, phi)
    exp_check = compare_series("solvable-explicit", params, multi, explicit, ANCHORS["solvable-explicit"])
    lhs = geometric_inverse(circ_power(make_e(N), L).h_shift(-N * L), N * L, 1, order)
    rhs = _perturbed(exp_star(multi), perturb)
    main = compare_series("solvable-case", params, lhs, rhs, ANCHORS["solvable-case"])
    report = combine("solvable-case", params, order, [main, exp_check], ANCHORS["solvable-case"])
    return report


# ---------------------------------------------------------------------------
# the arcsin case


def arcsin_power_coefficients(k: int, order: int) -> RatSeries:
    """(2 arcsin(X/2))^(2k) via (2k)! sum_{n>=k} H2_{k-1}(n) / (n^2 binom(2n, n)) X^(2n)."""
    cs = [Fraction(0)] * (order + 1)
    for n in range(k, order // 2 + 1):
        cs[2 * n] = math.factorial(2 * k) * harmonic2(k - 1, n) / (n * n * math.comb(2 * n, n))
    return RatSeries.from_rationals(cs, order)


def arcsin_power_direct(k: int, order: int) -> RatSeries:
    """The same series by composing the arcsin Taylor series."""
    inner = RatSeries.from_rationals(arcsin_coefficients(order), order).substitute_power(Fraction(1, 2), 1)
    return inner.scale(2) ** (2 * k)


def bachmann_exponent(order: int, phi: PhiFactory = make_phi) -> AlgSeries:
    """2 sum_k (-1)^(k-1)/(2k)! h^-2k phi_2k (2 arcsin(X/2))^2k."""
    cs = [AlgebraElement.zero()] * (order + 1)
    for k in range(1, order // 2 + 1):
        series = arcsin_power_coefficients(k, order)
        element = phi(2 * k).h_shift(-2 * k).scale(Fraction(2 * (-1) ** (k - 1), math.factorial(2 * k)))
        for n in range(order + 1):
            if series[n]:
                cs[n] = cs[n] + element.scale(series[n])
    return AlgSeries(cs, order)


def _rotate_even(series: AlgSeries) -> AlgSeries:
    # X -> iX on a series supported in even degrees
    if any(series.coeffs[n] for n in range(1, series.order + 1, 2)):
        raise ValueError("series has odd-degree terms; X -> iX leaves Q")
    return series.map(lambda n, c: c if n % 4 == 0 else -c)


def verify_bachmann_exact(order: int, perturb=None) -> VerificationReport:
    """The z^2 - z exponent under X -> iX versus the arcsin form, then the full identity."""
    P = PolynomialSpec.solvable(2)
    params = {"P": P.to_text(), "L": 1}
    general = _rotate_even(main_exponent(P, 1, order))
    arcsin_form = _perturbed(bachmann_exponent(order), perturb)
    exponents = compare_series("bachmann-exponent", params, general, arcsin_form, ANCHORS["bachmann-exact"])
    powers = []
    for k in range(1, order // 2 + 1):
        powers.append(
            compare_series(
                "arcsin-power", {"k": k}, arcsin_power_coefficients(k, order), arcsin_power_direct(k, order)
            )
        )
    lhs = geometric_inverse(make_e(2).h_shift(-2), 2, -1, order)
    full = compare_series("bachmann-identity", params, lhs, exp_star(arcsin_form), ANCHORS["bachmann-exact"])
    return combine("bachmann-exact", params, order, [exponents, full, *powers], ANCHORS["bachmann-exact"])


# ---------------------------------------------------------------------------
# properties of varphi


THETA = (Fraction(0), Fraction(1))


def varphi_rel_sides(theta, order: int) -> tuple[RatSeries, RatSeries]:
    phi = varphi(theta, order)
    if theta is None:
        scaled = phi.scale_poly(THETA, "theta")
    else:
        scaled = phi.scale(Fraction(theta))
    x_times = RatSeries([(), *rat_series_exp(scaled).coeffs], order, phi.param)
    lhs = rat_series_exp(phi) - x_times
    return lhs, RatSeries.one(order, phi.param)


def varphi_power_sides(k: int, order: int) -> tuple[RatSeries, RatSeries]:
    phi = varphi(None, order)
    lhs = (phi**k).scale(Fraction(1, math.factorial(k)))
    cs = [()] * (order + 1)
    for n in range(1, order + 1):
        poly = [Fraction(0)] * (n + 1)
        for j in range(k, n + 1):
            poly[j - k] += Fraction(
                (-1) ** (n - j) * stirling1(n, j) * math.comb(j - 1, k - 1) * n ** (j - k),
                math.factorial(n),
            )
        cs[n] = poly_trim(poly)
    return lhs, RatSeries(cs, order, "theta")


def exp_strange_sides(lam, order: int) -> tuple[RatSeries, RatSeries]:
    lam = Fraction(lam)
    phi = varphi(None, order)
    lhs = rat_series_exp(phi.scale(lam))
    cs = [(Fraction(1),)]
    for n in range(1, order + 1):
        poly = (lam / math.factorial(n),)
        for a in range(1, n):
            poly = poly_mul(poly, (lam - a, Fraction(n)))
        cs.append(poly)
    return lhs, RatSeries(cs, order, "theta")


def appendix_b_reports(
    order_rel: int = 20,
    order_power: int = 10,
    thetas=(Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)),
    powers=(1, 2, 3, 4, 5),
    lambdas=(Fraction(1), Fraction(1, 2), Fraction(-3, 2), Fraction(2)),
    perturb=None,
) -> list[VerificationReport]:
    out = []
    for theta in thetas:
        lhs, rhs = varphi_rel_sides(theta, order_rel)
        out.append(compare_series("varphi-rel", {"theta": str(theta)}, lhs, _perturbed_rat(rhs, perturb), ANCHORS["varphi-rel"]))
    lhs, rhs = varphi_rel_sides(None, order_power)
    out.append(compare_series("varphi-rel", {"theta": "symbolic"}, lhs, rhs, ANCHORS["varphi-rel"]))
    for k in powers:
        lhs, rhs = varphi_power_sides(k, order_power)
        out.append(compare_series("varphi-power", {"k": k, "theta": "symbolic"}, lhs, rhs, ANCHORS["varphi-power"]))
    for lam in lambdas:
        lhs, rhs = exp_strange_sides(lam, order_power)
        out.append(compare_series("exp-strange", {"lambda": str(lam), "theta": "symbolic"}, lhs, rhs, ANCHORS["exp-strange"]))
    for name, check in POWER_SUM_CHECKS.items():
        failures = check()
        out.append(
            VerificationReport(
                name, {}, None, VERIFIED if not failures else MISMATCH,
                first_mismatch=None if not failures else {"index": repr(failures[0])},
            )
        )
    return out


def verify_appendix_b(order: int = 20, perturb=None) -> VerificationReport:
    if order < 2:
        raise ValueError("order must be >= 2")
    parts = appendix_b_reports(order_rel=order, order_power=min(order, 10), perturb=perturb)
    return combine("appendix-b", {}, order, parts)


# ---------------------------------------------------------------------------
# omega-deformed Bernoulli polynomials


def bernoulli_omega(n_max: int) -> list[tuple]:
    """Polynomials B_2(omega), ..., B_{2 n_max}(omega), low degree first.

    With y = pi i x, arcsin(omega y)/omega has coefficients in Q[omega^2] and
    (2 pi x)^(2n) = (-4)^n y^(2n), so everything stays rational.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    order = 2 * n_max + 1
    asin = arcsin_coefficients(order)
    inner_cs = [()] * (order + 1)
    for n, c in enumerate(asin):
        if c:
            poly = [Fraction(0)] * n
            poly[n - 1] = c  # omega^(n-1) y^n
            inner_cs[n] = poly_trim(poly)
    inner = RatSeries(inner_cs, order, "omega")
    ratio = compose(sin_coefficients(order), inner).shift_down(1)
    logged = rat_series_log1p(ratio - RatSeries.one(ratio.order, "omega"))
    out = []
    for n in range(1, n_max + 1):
        scale = Fraction(math.factorial(2 * n) * 2 * n, (-4) ** n)
        out.append(poly_scale(logged.coeff(2 * n), scale))
    return out


def verify_bernoulli_omega(n_max: int = 6) -> VerificationReport:
    """Listed closed forms for n <= 4 and the omega -> 0 limit for all n."""
    listed = {
        1: (Fraction(1, 6), 0, Fraction(-1, 6)),
        2: (Fraction(-1, 30), 0, Fraction(-10, 30), 0, Fraction(11, 30)),
        3: (Fraction(2, 84), 0, Fraction(21, 84), 0, Fraction(168, 84), 0, Fraction(-191, 84)),
        4: (Fraction(-3, 90), 0, Fraction(-40, 90), 0, Fraction(-294, 90), 0, Fraction(-2160, 90), 0, Fraction(2497, 90)),
    }
    polys = bernoulli_omega(n_max)
    parts = []
    for n, poly in enumerate(polys, start=1):
        ok = True
        reason = None
        if n in listed:
            expected = poly_trim(listed[n])
            if poly != expected:
                ok, reason = False, "closed form"
        if (poly[0] if poly else 0) != bernoulli(2 * n):
            ok, reason = False, "omega->0 limit"
        if any(poly[i] for i in range(1, len(poly), 2)):
            ok, reason = False, "odd power of omega"
        parts.append(
            VerificationReport(
                f"B{2 * n}(omega)", {"n": n}, None, VERIFIED if ok else MISMATCH,
                value=poly_text(poly, "omega"),
                first_mismatch=None if ok else {"check": reason},
            )
        )
    return combine("bernoulli-omega", {"nmax": n_max}, None, parts)

