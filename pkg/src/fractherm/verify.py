"""Numerical certification checks for solved problems.

Each check turns one piece of the model's theory into a runnable test:

* ``residual``: does a candidate fixed point satisfy the differential
  form of the model?  The fractional derivative is recovered by finite
  differences, so node 0 sits inside the singular layer and is excluded
  from all norms; decay assertions use the interior region away from the
  origin, where the derivative recovery is reliable.
* ``check_initial_condition``: the order-beta integral of u must vanish
  at t -> 0 for every sampled beta.
* ``empirical_contraction_rate``: measured Lipschitz quotients of the
  fixed-point map over random pairs, to compare against the theoretical
  contraction factor.
* ``bound_check``: the solved iterate must respect the a-priori ceiling.
* ``convergence_study``: observed refinement orders of the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .fracquad import build_weights, rl_derivative
from .gammafn import gamma
from .mesh import GridFunction, Mesh, make_mesh
from .model import ThermistorProblem, apply_fixed_point_map, rhs_field
from .solver import SolveReport, SolverOptions, apriori_bound, solve_picard, weighted_norm

DEFAULT_BETAS = (0.1, 0.5, 1.0)
INTERIOR_FRACTION = 0.125  # decay norms look at t >= INTERIOR_FRACTION * T
_BOUND_SLACK = 1e-6


def residual(problem: ThermistorProblem, u: GridFunction) -> GridFunction:
    """Nodewise defect: derivative of order 2*alpha of u minus the driving field."""
    if u.mesh.T != problem.T:
        raise ValueError(
            f"grid endpoint {u.mesh.T} does not match problem interval {problem.T}"
        )
    two_a = problem.order.two_alpha
    w1m = build_weights(u.mesh, 1.0 - two_a)
    drv = rl_derivative(u, two_a, w1m)
    rhs = rhs_field(problem, u)
    return GridFunction(u.mesh, drv.values - rhs.values)


@dataclass(frozen=True)
class ResidualNorms:
    """Norms of a residual with node 0 excluded.

    ``sup`` runs over nodes 1..n.  ``interior_sup`` restricts to nodes
    with t >= INTERIOR_FRACTION * T: the finite-difference derivative is
    only first-order accurate away from the origin, and inside the
    singular layer its defect is scale-invariant (it does not shrink
    under refinement), so refinement-decay assertions must stay clear of
    the first few nodes.  ``l1`` is the trapezoid integral of |r| over
    [t_1, T].
    """

    sup: float
    interior_sup: float
    l1: float


def residual_norms(r: GridFunction, interior_fraction: float = INTERIOR_FRACTION) -> ResidualNorms:
    t = r.mesh.nodes
    absr = np.abs(r.values)
    interior = t >= interior_fraction * r.mesh.T
    interior[0] = False
    return ResidualNorms(
        sup=float(np.max(absr[1:])),
        interior_sup=float(np.max(absr[interior])),
        l1=float(np.trapezoid(absr[1:], t[1:])),
    )


@dataclass(frozen=True)
class InitialConditionCheck:
    passed: bool
    betas: tuple[float, ...]
    values: tuple[float, ...]
    limits: tuple[float, ...]


def _integral_at_first_node(u: GridFunction, beta: float) -> float:
    # order-beta integral at t_1 needs only the first weight row
    t1 = float(u.mesh.nodes[1])
    q1 = t1**beta / gamma(beta + 1.0)
    q2 = t1 * q1 - beta * t1 ** (beta + 1.0) / gamma(beta + 2.0)
    w_right = q2 / t1
    return (q1 - w_right) * float(u.values[0]) + w_right * float(u.values[1])


def check_initial_condition(
    u: GridFunction, betas: tuple[float, ...] = DEFAULT_BETAS
) -> InitialConditionCheck:
    """Check that order-beta integrals of u are continuity-small at the first node.

    For each beta the integral at t_1 is compared against twice the crude
    ceiling sup|u| * t_1**beta / Gamma(beta + 1); any continuous u passes,
    and the recorded values document the decay toward t = 0.
    """
    sup_u = float(np.max(np.abs(u.values)))
    values, limits = [], []
    for beta in betas:
        beta = float(beta)
        if not (0.0 < beta <= 1.0):
            raise ValueError(f"beta must lie in (0, 1], got {beta!r}")
        val = _integral_at_first_node(u, beta)
        lim = 2.0 * sup_u * float(u.mesh.nodes[1]) ** beta / gamma(beta + 1.0)
        values.append(val)
        limits.append(lim)
    passed = all(abs(v) <= lim for v, lim in zip(values, limits))
    return InitialConditionCheck(
        passed=passed, betas=tuple(float(b) for b in betas),
        values=tuple(values), limits=tuple(limits),
    )


def empirical_contraction_rate(
    problem: ThermistorProblem,
    N: float,
    mesh: Mesh,
    trials: int = 20,
    seed: int = 0,
) -> float:
    """Max measured ratio |F u - F v| / |u - v| in the weighted norm.

    Trial pairs draw nodal values uniformly from [0, 2 * a-priori bound];
    each trial owns an RNG stream keyed by (seed, trial), so the result
    is reproducible no matter how trials are scheduled.  Degenerate pairs
    (u == v on the grid) are skipped.
    """
    if not (isinstance(trials, int) and trials >= 1):
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    if mesh.T != problem.T:
        raise ValueError(
            f"mesh endpoint {mesh.T} does not match problem interval {problem.T}"
        )
    N = float(N)
    w2a = build_weights(mesh, problem.order.two_alpha)
    bound = apriori_bound(problem, N)
    scale = 2.0 * bound if math.isfinite(bound) and bound > 0.0 else 2.0
    envelope = np.exp(-N * mesh.nodes)
    best = 0.0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        a = rng.uniform(0.0, scale, mesh.n + 1)
        b = rng.uniform(0.0, scale, mesh.n + 1)
        den = float(np.max(envelope * np.abs(a - b)))
        if den == 0.0:
            continue
        fa = apply_fixed_point_map(problem, GridFunction(mesh, a), w2a)
        fb = apply_fixed_point_map(problem, GridFunction(mesh, b), w2a)
        num = float(np.max(envelope * np.abs(fa.values - fb.values)))
        best = max(best, num / den)
    return best


def bound_check(report: SolveReport, problem: ThermistorProblem, N: float) -> bool:
    """True iff the converged iterate sits under the a-priori ceiling."""
    if not report.converged:
        raise ValueError("bound_check needs a converged solve report")
    return weighted_norm(report.u, N) <= apriori_bound(problem, N) * (1.0 + _BOUND_SLACK)


@dataclass(frozen=True)
class ConvergenceStudy:
    ns: tuple[int, ...]
    errors: tuple[float, ...]
    orders: tuple[float, ...]


def convergence_study(
    problem: ThermistorProblem,
    base_n: int,
    levels: int,
    grading: float = 1.0,
    opts: SolverOptions | None = None,
    exact=None,
    error_floor: float = 1e-13,
) -> ConvergenceStudy:
    """Solve on n, 2n, 4n, ... and report sup errors with observed orders.

    Errors are measured against ``exact`` (a callable of t) when given,
    otherwise against the finest level restricted to shared nodes.  An
    observed order is reported as +inf when the finer error has already
    hit the rounding floor (discretisations that are exact for a problem
    produce noise-level errors with meaningless ratios).
    """
    if levels < 2:
        raise ValueError(f"a convergence study needs at least 2 levels, got {levels}")
    ns = [base_n * 2**k for k in range(levels)]
    solutions = []
    for n in ns:
        mesh = make_mesh(problem.T, n, grading)
        solutions.append(solve_picard(problem, mesh, opts).u)

    errors = []
    if exact is not None:
        for u in solutions:
            ref = np.asarray(exact(u.mesh.nodes), dtype=float)
            errors.append(float(np.max(np.abs(u.values - ref))))
    else:
        fine = solutions[-1]
        for k, u in enumerate(solutions[:-1]):
            stride = 2 ** (levels - 1 - k)
            errors.append(float(np.max(np.abs(u.values - fine.values[::stride]))))

    scale = max(float(np.max(np.abs(solutions[-1].values))), 1.0)
    floor = error_floor * scale
    orders = []
    for e_coarse, e_fine in zip(errors, errors[1:]):
        if e_fine <= floor:
            orders.append(math.inf)
        else:
            orders.append(math.log2(e_coarse / e_fine))
    return ConvergenceStudy(ns=tuple(ns), errors=tuple(errors), orders=tuple(orders))


def residual_refinement(
    problem: ThermistorProblem,
    base_n: int,
    levels: int = 3,
    grading: float = 1.0,
    opts: SolverOptions | None = None,
) -> tuple[tuple[int, ...], tuple[ResidualNorms, ...]]:
    """Residual norms of fresh solves on n, 2n, ...; feeds the decay checks."""
    ns = tuple(base_n * 2**k for k in range(levels))
    norms = []
    for n in ns:
        mesh = make_mesh(problem.T, n, grading)
        report = solve_picard(problem, mesh, opts)
        norms.append(residual_norms(residual(problem, report.u)))
    return ns, tuple(norms)
