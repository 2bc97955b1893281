import math

import pytest

from harmzeta.algebra import concat_mul, make_e
from harmzeta.omega import (
    OmegaContext,
    g_k_omega_closed,
    g_s_omega_integral,
    g_series,
    lattice_pair,
    omega_generating_series,
    phi_k_omega,
    three_term_residual,
    verify_contour_independence,
    verify_duality,
    verify_omega_gen,
    z_e2_reference,
    z_omega,
    z_omega_depth1,
)


def test_context_validation():
    with pytest.raises(ValueError):
        OmegaContext(0)
    with pytest.raises(ValueError):
        OmegaContext(2.0, epsilon=0.6)
    assert OmegaContext(2.0).epsilon == 0.25


def test_g2_at_one():
    assert g_k_omega_closed(2, OmegaContext(1.0)) == pytest.approx(1j / (4 * math.pi), abs=1e-15)


@pytest.mark.parametrize("omega", [0.7, 1.3])
@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_integral_matches_closed_form(omega, k):
    ctx = OmegaContext(omega, tol=1e-9)
    assert abs(g_s_omega_integral(k, ctx) - g_k_omega_closed(k, ctx)) < 1e-7


def test_lattice_sum_at_one():
    # omega = 1: each j = m + n is hit j times, so both sums are zeta(2)
    a, b = lattice_pair(3, 1.0)
    assert a == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert b == pytest.approx(math.pi**2 / 6, abs=1e-12)


def test_lattice_sum_direct():
    import numpy as np

    omega, s = 0.7, 4.0
    m, n = np.meshgrid(np.arange(0, 3000), np.arange(1, 3000))
    direct = float(np.sum((m + n * omega) ** -s))
    # the crude box misses a tail of order R^(2-s)
    assert lattice_pair(s, omega)[0] == pytest.approx(direct, abs=1e-6)


@pytest.mark.parametrize("s", [3.0, 3.5, 5.0])
def test_series_expression(s):
    ctx = OmegaContext(0.7, tol=1e-9)
    assert abs(g_s_omega_integral(s, ctx) - g_series(s, ctx)) < 1e-7


@pytest.mark.parametrize("s, omega", [(2, 0.8), (2.5, 0.8), (4, 1.3), (3 + 0.5j, 0.6)])
def test_three_term(s, omega):
    assert three_term_residual(s, OmegaContext(omega, tol=1e-9)) < 1e-6


@pytest.mark.parametrize("s", [2, 2.5, 1.5])
def test_contour_offset(s):
    assert verify_contour_independence(s, OmegaContext(0.9, tol=1e-9), 1e-7).ok


def test_duality():
    assert verify_duality([(0, 1), (1, 2), (2, 3), (0, 3)], OmegaContext(0.5, tol=1e-10), 1e-7).ok


def test_z_e2():
    ctx = OmegaContext(0.5, tol=1e-10)
    assert abs(z_omega(make_e(2), ctx) - z_e2_reference(0.5)) < 1e-7
    assert abs((2j * math.pi * 0.5) ** 2 * g_k_omega_closed(2, ctx) - z_e2_reference(0.5)) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_phi_values_from_depth_one(k):
    ctx = OmegaContext(0.5, tol=1e-9)
    assert abs(phi_k_omega(k, ctx) - g_s_omega_integral(k, ctx)) < 1e-6


def test_z_omega_rejects_depth_two():
    with pytest.raises(ValueError):
        z_omega(concat_mul(make_e(2), make_e(2)), OmegaContext(0.5))


def test_generating_forms_agree():
    ctx = OmegaContext(0.5)
    a = omega_generating_series(1, 5, ctx, "bernoulli")
    b = omega_generating_series(1, 5, ctx, "arcsin")
    assert max(abs(x - y) for x, y in zip(a, b)) < 1e-10
    assert a[0] == pytest.approx(z_e2_reference(0.5), abs=1e-12)


def test_generating_series_higher_L():
    assert verify_omega_gen(2, 3, OmegaContext(0.5, tol=1e-9), 1e-6).ok


def test_small_omega_limit_trend():
    # the deviation from pi^2r/(2r+1)! shrinks linearly with omega
    errs = []
    for om in (1e-2, 1e-3, 1e-4):
        z = omega_generating_series(1, 2, OmegaContext(om), "arcsin")
        errs.append(abs(z[1] - math.pi**4 / 120))
    assert errs[1] < errs[0] / 5 and errs[2] < errs[1] / 5
