"""Command-line front end.

Usage:
    kirchhoff constants --p 3
    kirchhoff profile --p 2 --n 101
    kirchhoff curve --a 1 --b 1 --p 2 --xi-min 0.1 --xi-max 10 --n 200
    kirchhoff solve --a 1 --b 1 --p 2 --lambda 14
    kirchhoff eigen --p 3 --format json
    kirchhoff verify --a 1 --b 1 --p 2 --lambda 14 --n 2001

Exit codes: 0 success (also when no solution exists), 1 a verification
check failed, 2 usage or domain error, 3 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bifurcation, eigenproblem, profile, verify
from .errors import DomainError, NumericError, RegimeError
from .scalar_reduction import ProblemParams, solve_roots
from .special_integrals import constants

__all__ = ["OutputRecord", "build_parser", "main", "run"]

SCHEMA_VERSION = "1"
RESIDUAL_TOL = 1e-5
GAP_TOL = 1e-5
EQUIV_TOL = 1e-9
SHOOT_TOL = 1e-6
RAYLEIGH_SLACK = 1e-8


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    columns: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)
    checks: dict | None = None
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "meta": self.meta,
            "columns": self.columns,
            "rows": self.rows,
        }
        if self.checks is not None:
            payload["checks"] = self.checks
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema_version: {self.schema_version}\n")
        buf.write(f"# command: {self.command}\n")
        for key, value in self.inputs.items():
            buf.write(f"# input.{key}: {json.dumps(value)}\n")
        for key, value in self.meta.items():
            buf.write(f"# {key}: {json.dumps(value)}\n")
        if self.checks is not None:
            buf.write(f"# checks: {json.dumps(self.checks)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def _f(v) -> float:
    return float(v)


def cmd_constants(p: float) -> OutputRecord:
    c = constants(p)
    rows = [["A", c.a_p], ["B", c.b_p], ["C", c.c_p]]
    omitted = {}
    if c.p == 1.0:
        omitted["eta"] = omitted["grad_norm"] = "undefined at p = 1"
    else:
        rows += [["eta", profile.eta(p)], ["grad_norm", profile.grad_norm(p)]]
    if c.p > 1.0:
        rows.append(["mu1", eigenproblem.mu1(p)])
    else:
        omitted["mu1"] = "requires p > 1"
    meta = {"est_error": c.est_error}
    if omitted:
        meta["omitted"] = omitted
    return OutputRecord("constants", {"p": c.p}, ["quantity", "value"], rows, meta)


def cmd_profile(p: float, n: int) -> OutputRecord:
    grid = profile.sample(p, n)
    rows = [[_f(x), _f(v)] for x, v in zip(grid.xs, grid.values)]
    meta = {"max_value": grid.max_value, "grad_norm": grid.grad_norm}
    return OutputRecord("profile", {"p": grid.p, "n": n}, ["x", "value"], rows, meta)


def cmd_curve(a: float, b: float, p: float, xi_min: float, xi_max: float, n: int) -> OutputRecord:
    sweep = bifurcation.curve_sweep(a, b, p, (xi_min, xi_max), n)
    rows = [[pt.xi, pt.lam, pt.grad_norm, pt.branch.value] for pt in sweep.points]
    meta = {"shape": sweep.shape}
    if 1.0 < sweep.params.p < 3.0:
        meta["xi_at_minimum"] = bifurcation.xi_at_minimum(a, b, p)
    inputs = {"a": a, "b": b, "p": sweep.params.p, "xi_min": xi_min, "xi_max": xi_max, "n": n}
    return OutputRecord("curve", inputs, ["xi", "lambda", "grad_norm", "branch"], rows, meta)


def _branch_reports(a, b, p, lam, n):
    params = ProblemParams(a, b, p, lam)
    out = []
    for pt in bifurcation.xi_of_lambda(a, b, p, lam):
        grid = bifurcation.solution_profile(a, b, p, lam, pt.branch, n)
        out.append((pt, verify.residual(grid, params)))
    return params, out


def cmd_solve(a: float, b: float, p: float, lam: float, n: int) -> OutputRecord:
    _, reports = _branch_reports(a, b, p, lam, n)
    rows = [
        [pt.branch.value, pt.xi, pt.t, pt.grad_norm, rep.max_residual, rep.nonlocal_gap, rep.nonlocal_gap_rel]
        for pt, rep in reports
    ]
    thr, kind = bifurcation.existence_threshold(a, b, p)
    meta = {"count": len(rows), "threshold": thr, "threshold_kind": kind}
    inputs = {"a": a, "b": b, "p": float(p), "lambda": lam, "n": n}
    cols = ["branch", "xi", "t", "grad_norm", "max_residual", "nonlocal_gap", "nonlocal_gap_rel"]
    return OutputRecord("solve", inputs, cols, rows, meta)


def cmd_eigen(p: float) -> OutputRecord:
    pair = eigenproblem.eigen_pair(p)
    rows = [
        ["mu1", pair.mu1],
        ["zeta", pair.zeta],
        ["nu", pair.nu],
        ["phi_grad_norm", pair.phi_grad_norm],
    ]
    return OutputRecord("eigen", {"p": pair.p}, ["quantity", "value"], rows)


def _check(rows, name, value, limit, passed):
    rows.append([name, float(value), float(limit), bool(passed)])


def cmd_verify(a: float, b: float, p: float, lam: float, n: int, seed: int = 0) -> OutputRecord:
    """Run every oracle that applies to (a, b, p, lambda) and tabulate pass/fail."""
    params, reports = _branch_reports(a, b, p, lam, n)
    p = params.p
    rows: list[list] = []
    for pt, rep in reports:
        tag = pt.branch.value.lower()
        _check(rows, f"residual_{tag}", rep.max_residual, RESIDUAL_TOL, rep.max_residual <= RESIDUAL_TOL)
        _check(rows, f"nonlocal_gap_rel_{tag}", rep.nonlocal_gap_rel, GAP_TOL, rep.nonlocal_gap_rel <= GAP_TOL)
        back = bifurcation.lambda_of_xi(a, b, p, pt.xi)
        err = abs(back - lam) / lam
        _check(rows, f"roundtrip_{tag}", err, EQUIV_TOL, err <= EQUIV_TOL)
    if p != 1.0:
        roots = solve_roots(params)
        scan = verify.sign_scan_roots(params)
        agree = roots.count == scan.count == len(reports)
        _check(rows, "root_count_agreement", len(reports), roots.count, agree)
        if agree and reports:
            c = constants(p)
            xi_roots = sorted(math.sqrt(t / (2.0 * c.a_p * c.b_p)) for t in roots.roots)
            xi_curve = sorted(pt.xi for pt, _ in reports)
            err = max(abs(u - v) / v for u, v in zip(xi_roots, xi_curve))
            _check(rows, "branch_root_equivalence", err, EQUIV_TOL, err <= EQUIV_TOL)
        shoot_n = n if n % 2 == 1 else n + 1
        shot = verify.shoot_profile(p, shoot_n)
        exact = profile.sample(p, shoot_n)
        err = float(np.max(np.abs(shot.values - exact.values)))
        _check(rows, "shooting_vs_profile", err, SHOOT_TOL, err <= SHOOT_TOL)
    if p > 1.0:
        mu = eigenproblem.mu1(p)
        best = verify.rayleigh_sample(p, 100, seed)
        rel = best / mu - 1.0
        _check(rows, "rayleigh_min_rel_excess", rel, -RAYLEIGH_SLACK, rel >= -RAYLEIGH_SLACK)
    passed = all(r[3] for r in rows)
    inputs = {"a": a, "b": b, "p": float(p), "lambda": lam, "n": n, "seed": seed}
    checks = {"passed": passed, "failed": [r[0] for r in rows if not r[3]], "branches": len(reports)}
    return OutputRecord("verify", inputs, ["check", "value", "limit", "passed"], rows, checks=checks)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised checks")

    parser = argparse.ArgumentParser(
        prog="kirchhoff",
        description="Closed-form bifurcation data for -(b + a||u'||^2) u'' = lambda u^p on (-1, 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constants", parents=[common], help="A_p, B_p, C_p and derived scalars")
    sp.add_argument("--p", type=float, required=True)

    sp = sub.add_parser("profile", parents=[common], help="sample the normalised profile W_p")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n", type=int, default=101)

    sp = sub.add_parser("curve", parents=[common], help="sweep the bifurcation curve lambda(xi)")
    for name in ("--a", "--b", "--p", "--xi-min", "--xi-max"):
        sp.add_argument(name, type=float, required=True)
    sp.add_argument("--n", type=int, default=100)

    for name, text in (("solve", "all solutions for one lambda"), ("verify", "run every oracle")):
        sp = sub.add_parser(name, parents=[common], help=text)
        for flag in ("--a", "--b", "--p"):
            sp.add_argument(flag, type=float, required=True)
        sp.add_argument("--lambda", dest="lam", type=float, required=True)
        sp.add_argument("--n", type=int, default=2001)

    sp = sub.add_parser("eigen", parents=[common], help="first nonlocal eigenpair")
    sp.add_argument("--p", type=float, required=True)
    return parser


def _dispatch(args) -> OutputRecord:
    if args.command == "constants":
        return cmd_constants(args.p)
    if args.command == "profile":
        return cmd_profile(args.p, args.n)
    if args.command == "curve":
        return cmd_curve(args.a, args.b, args.p, args.xi_min, args.xi_max, args.n)
    if args.command == "solve":
        return cmd_solve(args.a, args.b, args.p, args.lam, args.n)
    if args.command == "eigen":
        return cmd_eigen(args.p)
    return cmd_verify(args.a, args.b, args.p, args.lam, args.n, args.seed)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        record = _dispatch(args)
    except (DomainError, RegimeError) as exc:
        print(f"kirchhoff {args.command}: error: {exc}", file=stderr)
        return 2
    except NumericError as exc:
        print(f"kirchhoff {args.command}: numeric failure: {exc} {exc.diagnostics}", file=stderr)
        return 3
    stdout.write(record.to_json() if args.format == "json" else record.to_csv())
    if record.checks is not None and not record.checks["passed"]:
        print(f"kirchhoff verify: failed checks: {', '.join(record.checks['failed'])}", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
