from fractions import Fraction

import pytest

from harmzeta.algebra import AlgebraElement, concat_power, make_e, make_g
from harmzeta.series import (
    AlgSeries,
    concat_inverse,
    exp_star,
    geometric_inverse,
    log_geometric_exponent,
    series_harmonic_mul,
)


def test_geometric_matches_concat_inverse():
    u = make_e(2).h_shift(-2)
    direct = geometric_inverse(u, 2, 1, 8)
    one_plus = AlgSeries.one(8) + AlgSeries.monomial(u, 2, 8)
    assert concat_inverse(one_plus) == direct
    assert direct[4] == concat_power(u, 2)


@pytest.mark.parametrize("letter", [make_g(1), make_g(2), make_e(2), AlgebraElement.letter(0)])
def test_exp_star_of_log_is_geometric(letter):
    # exp_*(sum (-1)^(n-1)/n u^{o n} X^n) = 1/(1 - uX) for u in the letter span
    order = 5
    assert exp_star(log_geometric_exponent(letter, order)) == geometric_inverse(letter, 1, -1, order)


def test_exp_star_is_a_homomorphism():
    order = 4
    f = AlgSeries.monomial(make_g(1), 1, order) + AlgSeries.monomial(make_g(2).scale(Fraction(1, 3)), 2, order)
    g = AlgSeries.monomial(make_e(2), 2, order)
    assert exp_star(f + g) == series_harmonic_mul(exp_star(f), exp_star(g))


def test_exp_star_rejects_constant():
    with pytest.raises(ValueError):
        exp_star(AlgSeries.one(3))


def test_substitute_sign():
    s = AlgSeries([AlgebraElement.one(), make_g(1), make_g(2)], 2)
    assert s.substitute_sign()[1] == -make_g(1)
