"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import math
import random
import time
from fractions import Fraction

from conftest import ACCEPTANCE_LINES
from harmzeta import omega as om
from harmzeta.algebra import AlgebraElement, harmonic_mul, make_g, make_phi
from harmzeta.identities import (
    bernoulli_omega,
    parse_polynomial,
    verify_appendix_b,
    verify_bachmann_exact,
    verify_main_identity,
    verify_solvable_case,
)
from harmzeta.qeval import QContext, verify_numeric_identity, z_q
from harmzeta.stirling import STIRLING_CHECKS, POWER_SUM_CHECKS, bernoulli


def record(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_general_identity():
    cases = [("z^2 - z", 1, 10), ("z^3 - z^2", 1, 10), ("z^3 - 2*z^2 + z", 1, 10), ("z^4 - z^3", 1, 10), ("z^2 - z", 2, 8)]
    notes, ok = [], True
    for text, L, order in cases:
        start = time.perf_counter()
        report = verify_main_identity(parse_polynomial(text), L, order)
        elapsed = time.perf_counter() - start
        ok &= report.ok and elapsed < 60
        notes.append(f"{text} L={L} order={order} {report.status} {elapsed:.2f}s")
    record(1, ok, "; ".join(notes))


def test_criterion_02_solvable_case():
    notes, ok = [], True
    for N, L in [(2, 1), (3, 1), (2, 2)]:
        report = verify_solvable_case(N, L, 8)
        explicit = next(d for d in report.details if d.identity == "solvable-explicit")
        ok &= report.ok and explicit.ok
        notes.append(f"(N={N},L={L}) {report.status}")
    record(2, ok, "; ".join(notes) + "; multisection and C-coefficient exponents agree exactly")


def test_criterion_03_bachmann_exact():
    report = verify_bachmann_exact(10)
    record(3, report.ok, f"z^2 - z exponent vs arcsin form to order 10: {report.status}")


def test_criterion_04_stirling_suite():
    start = time.perf_counter()
    failures = {name: check() for name, check in STIRLING_CHECKS.items()}
    elapsed = time.perf_counter() - start
    bad = [name for name, f in failures.items() if f]
    record(4, not bad and len(failures) == 7 and elapsed < 5, f"7 identities, failing={bad}, {elapsed:.2f}s")


def test_criterion_05_varphi_suite():
    report = verify_appendix_b(20)
    extra = {name: check() for name, check in POWER_SUM_CHECKS.items()}
    ok = report.ok and not any(extra.values())
    record(5, ok, f"relation (3 theta, order 20), power formula (order 10), power-sum and divided-difference checks: {report.status}")


def test_criterion_06_numeric_q_identities():
    parts = []
    b = verify_numeric_identity("bachmann", QContext(0.5, 1e-8), 4)
    parts.append(("bachmann q=0.5 r<=4 1e-8", b))
    for q in (0.3, 0.5, 0.7):
        parts.append((f"phik-g q={q} k<=6 1e-10", verify_numeric_identity("phik-g", QContext(q, 1e-10), 6)))
    kms = verify_numeric_identity("kms", QContext(0.3, 1e-7, N=2, S=frozenset({1}), sign=-1), 3)
    parts.append(("kms (0.3,2,{1},-1) r<=3 1e-7", kms))
    notes = []
    for label, report in parts:
        worst = max(d.abs_err for d in report.details)
        notes.append(f"{label}: max err {worst:.1e}")
    record(6, all(r.ok for _, r in parts), "; ".join(notes))


def _random_admissible(rng):
    out = AlgebraElement.zero()
    for _ in range(rng.randint(1, 3)):
        last = rng.randint(1, 3)
        word = (last,) if rng.random() < 0.5 else (rng.randint(0, 3), last)
        out = out + AlgebraElement.word(word, rng.randint(1, 5), rng.randint(-1, 1))
    return out


def test_criterion_07_homomorphism():
    rng = random.Random(7)
    worst = {}
    for label, ctx in [("Z_q", QContext(0.5, 1e-12)), ("KMS", QContext(0.5, 1e-12, N=2, S=frozenset({1}), sign=-1))]:
        errs = []
        for _ in range(50):
            x, y = _random_admissible(rng), _random_admissible(rng)
            lhs, rhs = z_q(harmonic_mul(x, y), ctx), z_q(x, ctx) * z_q(y, ctx)
            errs.append(abs(lhs - rhs) / abs(rhs))
        worst[label] = max(errs)
    record(7, all(v < 1e-8 for v in worst.values()), "50 pairs each, max rel err " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_08_omega_bernoulli():
    polys = bernoulli_omega(6)
    listed = [
        (Fraction(1, 6), 0, Fraction(-1, 6)),
        (Fraction(-1, 30), 0, Fraction(-10, 30), 0, Fraction(11, 30)),
        (Fraction(2, 84), 0, Fraction(21, 84), 0, Fraction(168, 84), 0, Fraction(-191, 84)),
        (Fraction(-3, 90), 0, Fraction(-40, 90), 0, Fraction(-294, 90), 0, Fraction(-2160, 90), 0, Fraction(2497, 90)),
    ]
    ok = all(polys[i] == tuple(Fraction(c) for c in listed[i]) for i in range(4))
    limit = all(p[0] == bernoulli(2 * n) for n, p in enumerate(polys, start=1))
    record(8, ok and limit, f"B2..B8 exact {ok}, B_2n(0)=B_2n for n<=6 {limit}")


def test_criterion_09_g_omega():
    notes, ok = [], True
    for omega in (0.7, 1.3):
        ctx = om.OmegaContext(omega, tol=1e-8)
        errs = [abs(om.g_s_omega_integral(k, ctx) - om.g_k_omega_closed(k, ctx)) for k in (2, 3, 4, 5, 6)]
        ok &= max(errs) < 1e-5
        notes.append(f"closed forms omega={omega} max err {max(errs):.1e}")
    residuals = [om.three_term_residual(s, om.OmegaContext(0.8, tol=1e-8)) for s in (2, 2.5, 4)]
    ok &= max(residuals) < 1e-5
    notes.append(f"three-term max residual {max(residuals):.1e}")
    contour = om.verify_contour_independence(2.5, om.OmegaContext(0.7, tol=1e-8), 1e-5)
    ok &= contour.ok
    notes.append(f"contour offset diff {contour.abs_err:.1e}")
    record(9, ok, "; ".join(notes))


def test_criterion_10_depth_one():
    ctx = om.OmegaContext(0.5, tol=1e-9)
    duality = om.verify_duality([(0, 1), (1, 2), (2, 3)], ctx, 1e-6)
    e2 = om.verify_z_e2(ctx, 1e-6)
    oracle_gap = abs((2j * math.pi * 0.5) ** 2 * om.g_k_omega_closed(2, ctx) - om.z_e2_reference(0.5))
    ok = duality.ok and e2.ok and oracle_gap < 1e-12
    worst = max(d.abs_err for d in duality.details)
    record(10, ok, f"duality max err {worst:.1e}; Z(e2) err {e2.abs_err:.1e}")


def test_criterion_11_generating_series():
    ctx = om.OmegaContext(0.5)
    bernoulli_form = om.omega_generating_series(1, 4, ctx, "bernoulli")
    arcsin_form = om.omega_generating_series(1, 4, ctx, "arcsin")
    forms_gap = max(abs(a - b) for a, b in zip(bernoulli_form, arcsin_form))
    limit = om.verify_omega_limit(3, 1e-4, 1e-6)
    rel = [d.abs_err / (math.pi ** (2 * r) / math.factorial(2 * r + 1)) for r, d in enumerate(limit.details, start=1)]
    ok = forms_gap < 1e-10 and limit.ok
    record(11, ok, f"forms agree to {forms_gap:.1e} at omega=0.5; omega=1e-4 limit rel err "
                   + ", ".join(f"r={r} {e:.1e}" for r, e in enumerate(rel, start=1)) + " (tol 1e-6)")


def test_criterion_12_negative_controls():
    Z2 = parse_polynomial("z^2 - z")
    controls = {
        "main-identity": (verify_main_identity(Z2, 1, 10, perturb=(6, make_g(1))), 6),
        "main-identity phi2": (verify_main_identity(Z2, 1, 8, phi=lambda k: make_g(k) if k == 2 else make_phi(k)), 2),
        "solvable-case": (verify_solvable_case(3, 1, 9, perturb=(6, make_g(2))), 6),
        "bachmann-exact": (verify_bachmann_exact(10, perturb=(4, Fraction(1))), 4),
        "appendix-b": (verify_appendix_b(12, perturb=(3, Fraction(1, 5))), 3),
    }
    notes, ok = [], True
    for name, (report, degree) in controls.items():
        found = (report.first_mismatch or {}).get("degree")
        ok &= (not report.ok) and found == degree
        notes.append(f"{name} -> degree {found} (expected {degree})")
    record(12, ok, "; ".join(notes))
