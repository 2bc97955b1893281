"""Command-line entry point: ``harmzeta verify ...``, ``harmzeta table ...``, ``harmzeta all``.

Exit status is 0 when every requested check verifies, 1 on any mismatch and 2
on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable

from . import identities, omega, qeval
from .algebra import make_phi
from .exact import poly_text
from .report import MISMATCH, VERIFIED, VerificationReport, combine
from .stirling import STIRLING_CHECKS

THREADS_ENV = "HARMZETA_THREADS"

Job = Callable[[], VerificationReport]


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# individual checks


def stirling_report() -> VerificationReport:
    parts = []
    for name, check in STIRLING_CHECKS.items():
        failures = check()
        parts.append(
            VerificationReport(
                name, {}, None, VERIFIED if not failures else MISMATCH,
                first_mismatch=None if not failures else {"index": repr(failures[0])},
            )
        )
    return combine("stirling", {}, None, parts)


def _qctx(args, **extra) -> qeval.QContext:
    return qeval.QContext(args.q, args.tol if args.tol is not None else 1e-8, **extra)


def _octx(args, tol: float) -> omega.OmegaContext:
    return omega.OmegaContext(args.omega, args.epsilon, tol)


def _parse_residues(text: str) -> frozenset:
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"cannot parse residue set {text!r}") from None


def _require_order(order: int) -> int:
    if order < 1:
        raise InputError("order >= 1 violated")
    return order


def verify_job(args) -> Job:
    name = args.identity
    if name == "main-identity":
        P = identities.parse_polynomial(args.poly)
        order = _require_order(args.order)
        return lambda: identities.verify_main_identity(P, args.L, order)
    if name == "solvable":
        order = _require_order(args.order)
        return lambda: identities.verify_solvable_case(args.N, args.L, order)
    if name == "bachmann":
        order = _require_order(args.order)
        return lambda: identities.verify_bachmann_exact(order)
    if name == "appendix-b":
        order = _require_order(args.order)
        return lambda: identities.verify_appendix_b(max(order, 2))
    if name == "bachmann-q":
        ctx = _qctx(args)
        return lambda: qeval.verify_numeric_identity("bachmann", ctx, args.rmax)
    if name == "kms":
        ctx = _qctx(args, N=args.N, S=_parse_residues(args.S), sign=args.sign)
        return lambda: qeval.verify_numeric_identity("kms", ctx, args.rmax)
    if name == "phik-g":
        ctx = _qctx(args)
        return lambda: qeval.verify_numeric_identity("phik-g", ctx, args.kmax)
    if name == "solvable-q":
        ctx = _qctx(args)
        return lambda: qeval.verify_numeric_identity("solvable-q", ctx, args.rmax, N=args.N, L=args.L)
    tol = args.tol if args.tol is not None else 1e-6
    ctx = _octx(args, tol * 1e-2)
    if name == "three-term":
        return lambda: omega.verify_three_term(args.s, ctx, tol)
    if name == "omega-gen":
        return lambda: omega.verify_omega_gen(args.L, args.rmax, ctx, tol)
    if name == "duality":
        return lambda: omega.verify_duality([(0, 1), (1, 2), (2, 3)], ctx, tol)
    if name == "g-closed":
        return lambda: omega.verify_g_closed(range(2, args.kmax + 1), ctx, tol)
    if name == "z-e2":
        return lambda: omega.verify_z_e2(ctx, tol)
    if name == "omega-limit":
        return lambda: omega.verify_omega_limit(args.rmax, args.omega, tol)
    raise InputError(f"unknown identity {name!r}")


VERIFY_NAMES = [
    "main-identity", "solvable", "bachmann", "appendix-b", "bachmann-q", "kms", "phik-g",
    "solvable-q", "three-term", "omega-gen", "duality", "g-closed", "z-e2", "omega-limit",
]


def all_jobs() -> list[Job]:
    """The desk-scale acceptance suite at default parameters."""
    jobs: list[Job] = []
    for text, L, order in [("z^2 - z", 1, 10), ("z^3 - z^2", 1, 10), ("z^3 - 2*z^2 + z", 1, 10),
                           ("z^4 - z^3", 1, 10), ("z^2 - z", 2, 8)]:
        P = identities.parse_polynomial(text)
        jobs.append(lambda P=P, L=L, order=order: identities.verify_main_identity(P, L, order))
    for N, L in [(2, 1), (3, 1), (2, 2)]:
        jobs.append(lambda N=N, L=L: identities.verify_solvable_case(N, L, 8))
    jobs.append(lambda: identities.verify_bachmann_exact(10))
    jobs.append(stirling_report)
    jobs.append(lambda: identities.verify_appendix_b(20))
    jobs.append(lambda: identities.verify_bernoulli_omega(6))
    jobs.append(lambda: qeval.verify_numeric_identity("bachmann", qeval.QContext(0.5, 1e-8), 4))
    for q in (0.3, 0.5, 0.7):
        jobs.append(lambda q=q: qeval.verify_numeric_identity("phik-g", qeval.QContext(q, 1e-10), 6))
    jobs.append(lambda: qeval.verify_numeric_identity(
        "kms", qeval.QContext(0.3, 1e-7, N=2, S=frozenset({1}), sign=-1), 3))
    for N, L in [(2, 1), (3, 1), (2, 2)]:
        jobs.append(lambda N=N, L=L: qeval.verify_numeric_identity("solvable-q", qeval.QContext(0.5, 1e-8), 3, N=N, L=L))
    for om in (0.7, 1.3):
        jobs.append(lambda om=om: omega.verify_g_closed(range(2, 7), omega.OmegaContext(om, tol=1e-8), 1e-5))
    for s in (2, 2.5, 4):
        jobs.append(lambda s=s: omega.verify_three_term(s, omega.OmegaContext(0.8, tol=1e-8), 1e-5))
    jobs.append(lambda: omega.verify_g_series(5, omega.OmegaContext(0.7, tol=1e-8), 1e-5))
    jobs.append(lambda: omega.verify_contour_independence(2.5, omega.OmegaContext(0.7, tol=1e-8), 1e-5))
    jobs.append(lambda: omega.verify_duality([(0, 1), (1, 2), (2, 3)], omega.OmegaContext(0.5, tol=1e-9), 1e-6))
    jobs.append(lambda: omega.verify_z_e2(omega.OmegaContext(0.5, tol=1e-9), 1e-6))
    jobs.append(lambda: omega.verify_phik_g_omega(3, omega.OmegaContext(0.5, tol=1e-8), 1e-5))
    jobs.append(lambda: omega.verify_omega_gen(1, 4, omega.OmegaContext(0.5, tol=1e-9), 1e-10))
    jobs.append(lambda: omega.verify_omega_limit(3, 1e-4, 1e-6))
    return jobs


def run_jobs(jobs: list[Job], threads: int | None = None) -> list[VerificationReport]:
    """Run jobs (optionally in threads); results keep the job order."""
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    if threads <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: job(), jobs))


# ---------------------------------------------------------------------------
# tables


def q_table(q: float, kmax: int, tol: float) -> list[dict]:
    ctx = qeval.QContext(q, tol)
    rows = []
    for k in range(1, kmax + 1):
        lhs = qeval.z_q(make_phi(k).h_shift(-k), ctx)
        rhs = qeval.g_k_q(k, ctx)
        rows.append({"name": f"G{k}", "params": {"q": q, "k": k}, "lhs": lhs, "rhs": rhs, "abs_err": abs(lhs - rhs)})
    for r in range(1, kmax // 2 + 1):
        from .algebra import concat_power, make_e

        lhs = qeval.a_r_q(r, ctx)
        rhs = qeval.z_q(concat_power(make_e(2), r).h_shift(-2 * r), ctx)
        rows.append({"name": f"A{r}", "params": {"q": q, "r": r}, "lhs": lhs, "rhs": rhs, "abs_err": abs(lhs - rhs)})
    return rows


def g_omega_table(om: float, kmax: int, tol: float) -> list[dict]:
    ctx = omega.OmegaContext(om, tol=tol)
    rows = []
    for k in range(2, kmax + 1):
        value = omega.g_s_omega_integral(k, ctx)
        ref = omega.g_k_omega_closed(k, ctx)
        rows.append({
            "op": "G_k(omega)", "params": {"omega": om, "k": k},
            "value_re": value.real, "value_im": value.imag,
            "reference": [ref.real, ref.imag], "abs_err": abs(value - ref),
        })
    return rows


def bernoulli_rows(nmax: int) -> list[dict]:
    return [
        {"name": f"B{2 * n}(omega)", "value": poly_text(p, "omega")}
        for n, p in enumerate(identities.bernoulli_omega(nmax), start=1)
    ]


# ---------------------------------------------------------------------------
# output


def _csv_cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, default=_json_default)
    return "" if v is None else v


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"cannot serialise {type(x).__name__}")


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True, default=_json_default) + "\n"
    if fmt == "csv":
        keys: list[str] = []
        for row in rows:
            keys += [k for k in row if k not in keys]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in keys})
        return buf.getvalue()
    lines = []
    for row in rows:
        if "status" in row:
            params = json.dumps(row.get("params", {}), sort_keys=True, default=_json_default)
            line = f"{row['identity']} {params} order={row.get('order')} {row['status']}"
            if row.get("first_mismatch"):
                line += " " + json.dumps(row["first_mismatch"], sort_keys=True, default=_json_default)
            lines.append(line)
        elif "value" in row and "name" in row:
            lines.append(f"{row['name']} = {row['value']}")
        else:
            lines.append(" ".join(f"{k}={_csv_cell(v)}" for k, v in row.items()))
    return "\n".join(lines) + "\n"


def _report_rows(reports: list[VerificationReport], fmt: str) -> list[dict]:
    rows = [r.to_dict() for r in reports]
    if fmt != "json":
        # flat records: one per top-level check
        for row in rows:
            row.pop("details", None)
    return rows


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--output", help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="harmzeta", description="Verify generating-series identities for q- and omega-deformed MZVs.", parents=[common])
    parser.add_argument("--all", action="store_true", help="run the full default suite")
    sub = parser.add_subparsers(dest="command")

    v = sub.add_parser("verify", parents=[common], help="verify one identity")
    v.add_argument("identity", choices=VERIFY_NAMES)
    v.add_argument("--poly", default="z^2 - z")
    v.add_argument("--N", type=int, default=2)
    v.add_argument("--L", type=int, default=1)
    v.add_argument("--order", type=int, default=10)
    v.add_argument("--q", type=float, default=0.5)
    v.add_argument("--rmax", type=int, default=3)
    v.add_argument("--kmax", type=int, default=6)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--S", default="1", help="comma-separated residues mod N")
    v.add_argument("--sign", type=int, default=1, choices=[1, -1])
    v.add_argument("--omega", type=float, default=0.5)
    v.add_argument("--epsilon", type=float, default=None)
    v.add_argument("--s", type=float, default=2.0)

    t = sub.add_parser("table", parents=[common], help="numeric tables")
    t.add_argument("table", choices=["q", "g-omega"])
    t.add_argument("--q", type=float, default=0.5)
    t.add_argument("--omega", type=float, default=0.7)
    t.add_argument("--kmax", type=int, default=6)
    t.add_argument("--tol", type=float, default=1e-10)

    b = sub.add_parser("bernoulli-omega", parents=[common], help="exact omega-Bernoulli polynomials")
    b.add_argument("--nmax", type=int, default=4)

    sub.add_parser("stirling", parents=[common], help="classical Stirling identities")
    sub.add_parser("all", parents=[common], help="run the full default suite")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = "all" if args.all else args.command
    if command is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        if command == "table":
            if args.kmax < 1:
                raise InputError("kmax >= 1 violated")
            rows = q_table(args.q, args.kmax, args.tol) if args.table == "q" else g_omega_table(args.omega, args.kmax, args.tol)
            _emit(format_rows(rows, args.format), args.output)
            return 0
        if command == "bernoulli-omega":
            if args.nmax < 1:
                raise InputError("nmax >= 1 violated")
            _emit(format_rows(bernoulli_rows(args.nmax), args.format), args.output)
            return 0
        if command == "verify":
            jobs = [verify_job(args)]
        elif command == "stirling":
            jobs = [stirling_report]
        else:
            jobs = all_jobs()
        reports = run_jobs(jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if command == "all":
        reports.sort(key=lambda r: (r.identity, json.dumps(r.params, sort_keys=True, default=_json_default)))
    _emit(format_rows(_report_rows(reports, args.format), args.format), args.output)
    return 0 if all(r.ok for r in reports) else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
