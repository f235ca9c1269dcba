"""Command-line front end.

Subcommands::

    fractherm solve  PROBLEM [flags]   solve and write solution.csv + solve_report.txt
    fractherm verify PROBLEM [flags]   run certification checks, write verify_report.txt
    fractherm sweep  PROBLEM --lambda-grid start:stop:count [flags]
                                       per-coupling table, write sweep.csv

Exit codes: 0 ok, 1 input error, 2 iteration did not converge,
3 a verification check failed.  Artifacts use a fixed 17-significant-
digit decimal rendering, so identical inputs (and seed) reproduce
byte-identical files.  FRACTHERM_THREADS caps sweep workers.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .mesh import GridFunction, make_mesh
from .model import ThermistorProblem
from .probfile import ProblemFile, ProblemFormatError, format_problem, load_problem
from .solver import (
    AUTO,
    SolveReport,
    SolverOptions,
    apriori_bound,
    choose_norm_weight,
    contraction_constant,
    lambda_threshold,
    solve_picard,
    weighted_norm,
)
from .verify import (
    bound_check,
    check_initial_condition,
    empirical_contraction_rate,
    residual,
    residual_norms,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_CHECK_FAILED = 3

ALL_CHECKS = ("residual", "bound", "initial-condition", "contraction")
_RATE_SLACK = 1.05
_DECAY_RATIO = 0.75


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures into exit code 1
        raise _CliError(message)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _build_parser() -> _Parser:
    parser = _Parser(prog="fractherm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("problem", help="problem definition file")
        p.add_argument("--mesh-n", type=int, default=None, help="subinterval count")
        p.add_argument("--mesh-grading", type=float, default=None, help="grading exponent")
        p.add_argument("--N", default=AUTO, help="norm weight (positive real) or 'auto'")
        p.add_argument("--tol", type=float, default=1e-10, help="stopping tolerance")
        p.add_argument("--max-iter", type=int, default=200, help="iteration cap")
        p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
        p.add_argument("--out", default=".", help="output directory")

    p_solve = sub.add_parser("solve", help="solve and write the solution artifacts")
    common(p_solve)

    p_verify = sub.add_parser("verify", help="run certification checks")
    common(p_verify)
    p_verify.add_argument(
        "--checks",
        default=",".join(ALL_CHECKS),
        help="comma list from: " + ", ".join(ALL_CHECKS),
    )
    p_verify.add_argument(
        "--load-solution",
        default=None,
        help="CSV (t,u) to check instead of a fresh solve",
    )
    p_verify.add_argument("--trials", type=int, default=20, help="contraction trial pairs")

    p_sweep = sub.add_parser("sweep", help="coupling sweep table")
    common(p_sweep)
    p_sweep.add_argument(
        "--lambda-grid", required=True, help="grid spec 'start:stop:count' with start > 0"
    )
    return parser


def _parse_norm_weight(raw) -> float | str:
    if raw == AUTO:
        return AUTO
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise _CliError(f"--N expects a positive real or 'auto', got {raw!r}") from None
    if not (math.isfinite(value) and value > 0.0):
        raise _CliError(f"--N expects a positive real or 'auto', got {raw!r}")
    return value


def _load_inputs(args) -> tuple[ProblemFile, int, float, SolverOptions]:
    pf = load_problem(args.problem)
    mesh_n = pf.mesh_n if args.mesh_n is None else args.mesh_n
    grading = pf.mesh_grading if args.mesh_grading is None else args.mesh_grading
    if mesh_n < 1:
        raise _CliError(f"--mesh-n must be >= 1, got {mesh_n}")
    if grading < 1.0:
        raise _CliError(f"--mesh-grading must be >= 1, got {grading}")
    try:
        opts = SolverOptions(
            N=_parse_norm_weight(args.N), tol=args.tol, max_iter=args.max_iter
        )
    except ValueError as exc:
        raise _CliError(str(exc)) from None
    return pf, mesh_n, grading, opts


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_solution_csv(path: Path, u: GridFunction) -> None:
    rows = ["t,u"]
    rows.extend(f"{_fmt(t)},{_fmt(v)}" for t, v in zip(u.mesh.nodes, u.values))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _read_solution_csv(path: str, mesh) -> GridFunction:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read solution file: {exc}") from None
    lines = [ln for ln in raw.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "t,u":
        raise _CliError(f"{path}: expected a 't,u' CSV header")
    if len(lines) != mesh.n + 2:
        raise _CliError(
            f"{path}: expected {mesh.n + 1} data rows for the configured mesh, "
            f"got {len(lines) - 1}"
        )
    ts, us = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 2:
            raise _CliError(f"{path}: malformed row {ln!r}")
        try:
            ts.append(float(parts[0]))
            us.append(float(parts[1]))
        except ValueError:
            raise _CliError(f"{path}: malformed row {ln!r}") from None
    ts = np.asarray(ts)
    if np.max(np.abs(ts - mesh.nodes)) > 1e-12 * max(1.0, mesh.T):
        raise _CliError(f"{path}: t column does not match the configured mesh")
    try:
        return GridFunction(mesh, np.asarray(us))
    except ValueError as exc:
        raise _CliError(f"{path}: {exc}") from None


def _report_lines(
    pf: ProblemFile, mesh_n: int, grading: float, opts: SolverOptions,
    seed: int, report: SolveReport,
) -> list[str]:
    u = report.u.values
    lines = [
        "# fractherm solve report",
        f"version = {__version__}",
        f"seed = {seed}",
        f"mesh.n = {mesh_n}",
        f"mesh.grading = {_fmt(grading)}",
        f"N = {_fmt(report.N)}",
        f"tol = {_fmt(opts.tol)}",
        f"max_iter = {opts.max_iter}",
        f"initial_guess = {opts.initial_guess}",
        f"converged = {'true' if report.converged else 'false'}",
        f"iterations = {report.iterations}",
        f"empirical_rate = {_fmt(report.empirical_rate)}",
        f"theoretical_q = {_fmt(report.theoretical_q)}",
        f"lambda_threshold = {_fmt(report.lambda_threshold)}",
        f"apriori_bound = {_fmt(report.apriori_bound)}",
        f"weighted_norm_u = {_fmt(report.weighted_norm_u)}",
        f"residual_sup = {_fmt(report.residual_sup)}",
        f"u_min = {_fmt(float(np.min(u)))}",
        f"u_end = {_fmt(float(u[-1]))}",
        "step_norms = " + ", ".join(_fmt(s) for s in report.step_norms),
        "",
        "[problem]",
    ]
    lines.extend(format_problem(pf).splitlines())
    return lines


def _cmd_solve(args) -> int:
    pf, mesh_n, grading, opts = _load_inputs(args)
    mesh = make_mesh(pf.problem.T, mesh_n, grading)
    report = solve_picard(pf.problem, mesh, opts)
    out = _out_dir(args)
    _write_solution_csv(out / "solution.csv", report.u)
    lines = _report_lines(pf, mesh_n, grading, opts, args.seed, report)
    (out / "solve_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def _cmd_verify(args) -> int:
    pf, mesh_n, grading, opts = _load_inputs(args)
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    if not checks:
        raise _CliError("--checks selected nothing")
    for c in checks:
        if c not in ALL_CHECKS:
            raise _CliError(f"unknown check {c!r}; available: {', '.join(ALL_CHECKS)}")
    if args.trials < 1:
        raise _CliError(f"--trials must be >= 1, got {args.trials}")

    problem = pf.problem
    mesh = make_mesh(problem.T, mesh_n, grading)
    loaded = None
    if args.load_solution is not None:
        loaded = _read_solution_csv(args.load_solution, mesh)

    if loaded is None:
        report = solve_picard(problem, mesh, opts)
        if not report.converged:
            out = _out_dir(args)
            lines = _report_lines(pf, mesh_n, grading, opts, args.seed, report)
            (out / "verify_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
            return EXIT_NO_CONVERGENCE
        N = report.N
    else:
        N = choose_norm_weight(problem) if opts.N == AUTO else float(opts.N)
        report = SolveReport(
            u=loaded, N=N, iterations=0, step_norms=(), empirical_rate=0.0,
            theoretical_q=contraction_constant(problem, N),
            lambda_threshold=lambda_threshold(problem, N),
            apriori_bound=apriori_bound(problem, N),
            weighted_norm_u=weighted_norm(loaded, N),
            converged=True,
        )

    sections: list[str] = []
    all_pass = True

    def emit(name: str, ok: bool, body: list[str]) -> None:
        nonlocal all_pass
        all_pass = all_pass and ok
        sections.append(f"[{name}]")
        sections.extend(body)
        sections.append(f"pass = {'true' if ok else 'false'}")
        sections.append("")

    for check in checks:
        if check == "residual":
            base_norms = residual_norms(residual(problem, report.u))
            report.residual_sup = base_norms.sup
            if loaded is not None:
                # refinement decay is meaningless for one fixed grid; require
                # the candidate to beat the trivial non-solution's defect level
                floor = problem.lam / (problem.f.c2 * problem.T**2)
                ok = base_norms.sup <= 0.5 * floor
                emit("residual", ok, [
                    f"sup = {_fmt(base_norms.sup)}",
                    f"interior_sup = {_fmt(base_norms.interior_sup)}",
                    f"l1 = {_fmt(base_norms.l1)}",
                    f"detector_floor = {_fmt(floor)}",
                ])
            else:
                levels = [base_norms]
                ok = True
                for factor in (2, 4):
                    fine_mesh = make_mesh(problem.T, mesh_n * factor, grading)
                    fine = solve_picard(problem, fine_mesh, opts)
                    ok = ok and fine.converged
                    levels.append(residual_norms(residual(problem, fine.u)))
                for coarse, fine_n in zip(levels, levels[1:]):
                    ok = ok and fine_n.interior_sup <= _DECAY_RATIO * coarse.interior_sup
                    ok = ok and fine_n.l1 <= _DECAY_RATIO * coarse.l1
                emit("residual", ok, [
                    "levels = " + ", ".join(str(mesh_n * 2**k) for k in range(3)),
                    "sup = " + ", ".join(_fmt(nm.sup) for nm in levels),
                    "interior_sup = " + ", ".join(_fmt(nm.interior_sup) for nm in levels),
                    "l1 = " + ", ".join(_fmt(nm.l1) for nm in levels),
                ])
        elif check == "bound":
            ok = bound_check(report, problem, N)
            emit("bound", ok, [
                f"weighted_norm_u = {_fmt(weighted_norm(report.u, N))}",
                f"apriori_bound = {_fmt(apriori_bound(problem, N))}",
            ])
        elif check == "initial-condition":
            icc = check_initial_condition(report.u)
            body = [
                f"beta_{_fmt(b)} = {_fmt(v)} (limit {_fmt(lim)})"
                for b, v, lim in zip(icc.betas, icc.values, icc.limits)
            ]
            emit("initial-condition", icc.passed, body)
        elif check == "contraction":
            rate = empirical_contraction_rate(
                problem, N, mesh, trials=args.trials, seed=args.seed
            )
            q = contraction_constant(problem, N)
            ok = rate <= q * _RATE_SLACK
            emit("contraction", ok, [
                f"trials = {args.trials}",
                f"empirical_rate = {_fmt(rate)}",
                f"theoretical_q = {_fmt(q)}",
            ])

    header = [
        "# fractherm verify report",
        f"version = {__version__}",
        f"seed = {args.seed}",
        f"mesh.n = {mesh_n}",
        f"mesh.grading = {_fmt(grading)}",
        f"N = {_fmt(N)}",
        "checks = " + ", ".join(checks),
        f"overall = {'pass' if all_pass else 'fail'}",
        "",
    ]
    out = _out_dir(args)
    text = "\n".join(header + sections + ["[problem]"] + format_problem(pf).splitlines())
    (out / "verify_report.txt").write_text(text + "\n", encoding="utf-8")
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def _parse_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise _CliError(f"--lambda-grid expects 'start:stop:count', got {spec!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise _CliError(f"--lambda-grid expects 'start:stop:count', got {spec!r}") from None
    if not (math.isfinite(start) and start > 0.0):
        raise _CliError(f"--lambda-grid start must be > 0, got {start}")
    if stop < start:
        raise _CliError(f"--lambda-grid stop must be >= start, got {stop}")
    if count < 1:
        raise _CliError(f"--lambda-grid count must be >= 1, got {count}")
    if count == 1:
        return np.asarray([start])
    return np.linspace(start, stop, count)


def _worker_count(rows: int) -> int:
    raw = os.environ.get("FRACTHERM_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise _CliError(f"FRACTHERM_THREADS must be an integer, got {raw!r}") from None
    if threads < 1:
        raise _CliError(f"FRACTHERM_THREADS must be >= 1, got {threads}")
    return min(threads, rows)


def _cmd_sweep(args) -> int:
    pf, mesh_n, grading, opts = _load_inputs(args)
    lambdas = _parse_grid(args.lambda_grid)
    mesh = make_mesh(pf.problem.T, mesh_n, grading)

    def row(lam: float) -> str:
        problem = replace(pf.problem, lam=float(lam))
        N = choose_norm_weight(problem) if opts.N == AUTO else float(opts.N)
        row_opts = SolverOptions(
            N=N, tol=opts.tol, max_iter=opts.max_iter, initial_guess=opts.initial_guess
        )
        report = solve_picard(problem, mesh, row_opts)
        threshold = lambda_threshold(problem, N)
        return ",".join([
            _fmt(lam),
            _fmt(lam / threshold),
            _fmt(contraction_constant(problem, N)),
            "true" if report.converged else "false",
            str(report.iterations),
            _fmt(report.weighted_norm_u),
            _fmt(report.apriori_bound),
            _fmt(report.empirical_rate),
        ])

    workers = _worker_count(len(lambdas))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, lambdas))
    else:
        rows = [row(lam) for lam in lambdas]

    header = (
        "lambda,lambda_over_threshold,q,converged,iterations,"
        "weighted_norm_u,apriori_bound,empirical_rate"
    )
    out = _out_dir(args)
    (out / "sweep.csv").write_text("\n".join([header] + rows) + "\n", encoding="utf-8")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_sweep(args)
    except _CliError as exc:
        print(f"fractherm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ProblemFormatError as exc:
        print(f"fractherm: error: {args.problem}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"fractherm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"fractherm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    raise SystemExit(main())
