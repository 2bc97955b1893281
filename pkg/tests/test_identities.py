from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmzeta.algebra import AlgebraElement, make_e, make_g, make_phi
from harmzeta.exact import RatSeries, arcsin_coefficients, multisection
from harmzeta.identities import (
    PolynomialSpec,
    alpha_power_sums,
    appendix_b_reports,
    arcsin_power_coefficients,
    arcsin_power_direct,
    bernoulli_omega,
    explicit_exponent,
    log_sum_powers,
    main_exponent,
    main_identity_sides,
    parse_polynomial,
    solvable_exponent,
    varphi,
    verify_appendix_b,
    verify_bachmann_exact,
    verify_bernoulli_omega,
    verify_main_identity,
    verify_solvable_case,
)
from harmzeta.stirling import bernoulli

Z2 = parse_polynomial("z^2 - z")


def newton_power_sums(P: PolynomialSpec, L: int, s_max: int, order: int) -> dict:
    """Power sums of the roots of 1 - X^{NL} P(z)^L in 1/z via Newton's identities."""
    dense = [Fraction(0), *P.coefficients]
    poly = [Fraction(1)]
    for _ in range(L):
        poly = [sum(poly[i] * dense[k - i] for i in range(len(poly)) if 0 <= k - i < len(dense))
                for k in range(len(poly) + len(dense) - 1)]
    NL = P.degree * L
    # the reciprocal roots alpha satisfy prod (1 - alpha z) = 1 - X^{NL} P(z)^L
    e = {k: RatSeries.from_rationals([0] * NL + [(-1) ** (k + 1) * poly[k]], order) if k < len(poly) else RatSeries.zero(order)
         for k in range(1, s_max + 1)}
    p = {}
    for s in range(1, s_max + 1):
        acc = e[s].scale((-1) ** (s - 1) * s)
        for i in range(1, s):
            acc = acc + (e[i] * p[s - i]).scale((-1) ** (i - 1))
        p[s] = acc
    return p


def test_parse_polynomial():
    assert Z2.coefficients == (-1, 1)
    assert parse_polynomial("z^3 - 2*z^2 + z").coefficients == (1, -2, 1)
    assert parse_polynomial("1/2*z^3 - 1/2 z").degree == 3
    assert PolynomialSpec.solvable(3).to_text() == "z^3 - z^2"


@pytest.mark.parametrize("text, message", [
    ("z^2 + 1", "P\\(0\\)=0"),
    ("z^2 + z", "P\\(1\\)=0"),
    ("z - z", "nonzero"),
    ("z^2 - w", "cannot parse"),
])
def test_parse_polynomial_rejects(text, message):
    with pytest.raises(ValueError, match=message):
        parse_polynomial(text)


def test_power_sums_small_case():
    a = alpha_power_sums(Z2, 1, 3, 6)
    assert a.p[1].rationals() == [0, 0, -1, 0, 0, 0, 0]
    assert a.p[2].rationals()[:5] == [0, 0, 2, 0, 1]
    assert a.p[3].rationals() == [0, 0, 0, 0, -3, 0, -1]


@pytest.mark.parametrize("text, L", [("z^2 - z", 1), ("z^3 - z^2", 1), ("z^3 - 2*z^2 + z", 1), ("z^2 - z", 2), ("2*z^3 - z^2 - z", 1)])
def test_power_sums_match_newton(text, L):
    P = parse_polynomial(text)
    order = 12
    a = alpha_power_sums(P, L, order, order)
    newton = newton_power_sums(P, L, order, order)
    for s in range(1, order + 1):
        assert a.p[s] == newton[s]


@pytest.mark.parametrize("text", ["z^2 - z", "z^3 - z^2", "z^4 - 3*z^2 + 2*z"])
def test_first_log_power_vanishes(text):
    a = alpha_power_sums(parse_polynomial(text), 1, 10, 10)
    assert log_sum_powers(a, 1, 10) == RatSeries.zero(10)


def test_second_log_power():
    a = alpha_power_sums(Z2, 1, 8, 8)
    s = log_sum_powers(a, 2, 6)
    assert s.rationals()[:5] == [0, 0, 2, 0, Fraction(-1, 6)]
    # against -2 (2 arcsin(X/2))^2 with X^2 -> -X^2
    oracle = arcsin_power_direct(1, 6)
    assert s.rationals() == [-2 * oracle[n] * (-1) ** (n // 2) for n in range(7)]
    assert log_sum_powers(a, 7, 6) == RatSeries.zero(6)
    with pytest.raises(ValueError, match="s_max"):
        log_sum_powers(alpha_power_sums(Z2, 1, 3, 8), 2, 8)


def test_sides_low_degrees():
    lhs, rhs = main_identity_sides(Z2, 1, 4)
    assert lhs[0] == rhs[0] == AlgebraElement.one()
    assert lhs[2] == rhs[2] == -make_e(2).h_shift(-2)


@pytest.mark.parametrize("text, L, order", [
    ("z^2 - z", 1, 12), ("z^3 - z^2", 1, 9), ("z^3 - 2*z^2 + z", 1, 10), ("z^4 - z^3", 1, 10),
    ("z^2 - z", 2, 8), ("z^3 - z^2", 2, 12), ("2*z^3 - z^2 - z", 1, 9), ("1/3*z^3 - 1/3*z", 1, 9),
])
def test_main_identity(text, L, order):
    report = verify_main_identity(parse_polynomial(text), L, order)
    assert report.ok, report.first_mismatch


@pytest.mark.parametrize("text, L", [("z^2 - z", 1), ("z^3 - z^2", 1), ("z^2 - z", 2), ("z^3 - 2*z^2 + z", 1)])
def test_support_on_multiples(text, L):
    P = parse_polynomial(text)
    NL = P.degree * L
    lhs, rhs = main_identity_sides(P, L, 10)
    exponent = main_exponent(P, L, 10)
    for n in range(1, 11):
        if n % NL:
            assert not lhs[n] and not rhs[n] and not exponent[n]


def test_phi_two_makes_first_coefficient_agree():
    lhs, rhs = main_identity_sides(Z2, 1, 2, phi=lambda k: make_e(2) if k == 2 else make_phi(k))
    assert lhs[2] == rhs[2]


def test_perturbed_phi_two_fails_at_degree_two():
    bad = lambda k: make_phi(k) + (make_g(1) if k == 2 else AlgebraElement.zero())
    report = verify_main_identity(Z2, 1, 8, phi=bad)
    assert not report.ok and report.first_mismatch["degree"] == 2


def test_varphi_values():
    half = varphi(Fraction(1, 2), 7)
    assert half.rationals() == [0, 1, 0, Fraction(-1, 24), 0, Fraction(3, 640), 0, Fraction(-5, 7168)]
    # -2i arcsin(ix/2): coefficient of x^(2j+1) is a_j (-1)^j / 4^j
    asin = arcsin_coefficients(7)
    assert half.rationals() == [asin[n] * (-1) ** (n // 2) / 2 ** (n - 1) if n % 2 else 0 for n in range(8)]
    assert varphi(Fraction(0), 5).rationals() == [0, 1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4), Fraction(1, 5)]
    assert varphi(None, 3).coeff(3) == (Fraction(1, 3), Fraction(-3, 2), Fraction(3, 2))


@pytest.mark.parametrize("N, L, order", [(2, 1, 10), (3, 1, 9), (2, 2, 8), (4, 1, 8), (3, 2, 12)])
def test_solvable_case(N, L, order):
    report = verify_solvable_case(N, L, order)
    assert report.ok, report.first_mismatch


@pytest.mark.parametrize("N, L", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_solvable_equals_general_with_sign_change(N, L):
    order = 12
    general = main_exponent(PolynomialSpec.solvable(N), L, order)
    assert solvable_exponent(N, L, order) == general.substitute_sign()
    assert explicit_exponent(N, L, order) == solvable_exponent(N, L, order)


def test_arcsin_expansion():
    for k in range(1, 5):
        assert arcsin_power_coefficients(k, 12) == arcsin_power_direct(k, 12)


def test_bachmann_exact():
    report = verify_bachmann_exact(12)
    assert report.ok, report.first_mismatch


def test_varphi_and_stirling_checks():
    assert verify_appendix_b(20).ok
    names = {r.identity for r in appendix_b_reports()}
    assert {"varphi-rel", "varphi-power", "exp-strange", "power-sum-stirling", "divided-difference"} <= names


@given(st.fractions(min_value=-3, max_value=3, max_denominator=9))
@settings(max_examples=25, deadline=None)
def test_varphi_relation_random_theta(theta):
    from harmzeta.identities import varphi_rel_sides

    lhs, rhs = varphi_rel_sides(theta, 10)
    assert lhs == rhs


def test_bernoulli_omega():
    polys = bernoulli_omega(6)
    assert polys[0] == (Fraction(1, 6), 0, Fraction(-1, 6))
    assert polys[1] == (Fraction(-1, 30), 0, Fraction(-1, 3), 0, Fraction(11, 30))
    for n, p in enumerate(polys, start=1):
        assert p[0] == bernoulli(2 * n)
        assert all(p[i] == 0 for i in range(1, len(p), 2))
    assert verify_bernoulli_omega(6).ok


def test_bernoulli_omega_at_one_vanishes():
    # every listed polynomial has the factor omega^2 - 1
    for p in bernoulli_omega(6):
        assert sum(p) == 0


@pytest.mark.parametrize("verifier, degree", [
    (lambda d: verify_main_identity(Z2, 1, 10, perturb=(d, make_g(1))), 4),
    (lambda d: verify_main_identity(parse_polynomial("z^3 - z^2"), 1, 9, perturb=(d, Fraction(1))), 6),
    (lambda d: verify_solvable_case(3, 1, 9, perturb=(d, make_g(2))), 3),
    (lambda d: verify_bachmann_exact(10, perturb=(d, make_g(2))), 6),
    (lambda d: verify_appendix_b(12, perturb=(d, Fraction(1, 7))), 5),
])
def test_negative_controls(verifier, degree):
    report = verifier(degree)
    assert not report.ok
    assert report.first_mismatch["degree"] == degree
