"""Solver and certification suite for a nonlocal thermistor fixed-point model.

The temperature u on [0, T] solves u = F(u) where F applies a fractional
integral of order 2*alpha to a driving field whose source term couples
to u through a global integral of the conductivity.  The package
provides the discrete operators, a Picard solver in an exponentially
weighted norm, and checks that certify contraction, uniqueness, the
a-priori bound, and the differential form of the model numerically.
"""

__version__ = "0.1.0"

from .fracquad import (
    FractionalOrder,
    WeightTable,
    build_weights,
    fractional_integral,
    rl_derivative,
)
from .gammafn import gamma
from .mesh import GridFunction, Mesh, make_mesh
from .model import (
    ConductivitySpec,
    SourceSpec,
    ThermistorProblem,
    apply_fixed_point_map,
    nonlocal_denominator,
    rhs_field,
)
from .probfile import ProblemFile, ProblemFormatError, format_problem, load_problem, parse_problem_text
from .sampling import sample_problem
from .solver import (
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
    ConvergenceStudy,
    InitialConditionCheck,
    ResidualNorms,
    bound_check,
    check_initial_condition,
    convergence_study,
    empirical_contraction_rate,
    residual,
    residual_norms,
    residual_refinement,
)

__all__ = [
    "__version__",
    "FractionalOrder",
    "WeightTable",
    "build_weights",
    "fractional_integral",
    "rl_derivative",
    "gamma",
    "GridFunction",
    "Mesh",
    "make_mesh",
    "ConductivitySpec",
    "SourceSpec",
    "ThermistorProblem",
    "apply_fixed_point_map",
    "nonlocal_denominator",
    "rhs_field",
    "ProblemFile",
    "ProblemFormatError",
    "format_problem",
    "load_problem",
    "parse_problem_text",
    "sample_problem",
    "SolveReport",
    "SolverOptions",
    "apriori_bound",
    "choose_norm_weight",
    "contraction_constant",
    "lambda_threshold",
    "solve_picard",
    "weighted_norm",
    "ConvergenceStudy",
    "InitialConditionCheck",
    "ResidualNorms",
    "bound_check",
    "check_initial_condition",
    "convergence_study",
    "empirical_contraction_rate",
    "residual",
    "residual_norms",
    "residual_refinement",
]
