"""Ground-state solver for the Kirchhoff-type equation

    -(a + b * int |grad u|^2) Lap u + V(x) u = f(u)  on R^3

restricted to radial functions on a truncated grid.  The ground state is
found by minimizing the energy over the dilation-projected constraint set
(the zero set of the dilation identity), cross-checked against a radial
shooting oracle combined with the scalar-field rescaling.
"""

from .grids import RadialGrid, RadialFunction, make_grid, l2_norm_sq, grad_norm_sq, rescale
from .problem import (
    Potential,
    Nonlinearity,
    ProblemSpec,
    HypothesisReport,
    SampleSpec,
    check_potential_hypotheses,
    check_nonlinearity_hypotheses,
)
from .functionals import (
    FunctionalValue,
    FiberingScan,
    energy,
    energy_limit,
    energy_lambda,
    pohozaev,
    pohozaev_limit,
    pohozaev_lambda,
    pohozaev_lambda_limit,
    fibering_value,
    fibering_derivative,
    iip_gap,
    fibering_scan,
)
from .projection import (
    NotInLambda,
    BracketingFailed,
    ProjectionResult,
    in_lambda_set,
    lambda_margin,
    project_to_manifold,
    reduced_energy,
    reduced_gradient,
)
from .solver import (
    SolveResult,
    SolverOptions,
    LambdaSweep,
    solve_ground_state,
    solve_scalar_field_shooting,
    kirchhoff_from_scalar_field,
    dilate_with_grid,
    ode_residual,
    ode_residual_pointwise,
    initial_iterate,
    lambda_sweep,
    mountain_pass_upper_bound,
)

__all__ = [
    "RadialGrid",
    "RadialFunction",
    "make_grid",
    "l2_norm_sq",
    "grad_norm_sq",
    "rescale",
    "Potential",
    "Nonlinearity",
    "ProblemSpec",
    "HypothesisReport",
    "SampleSpec",
    "check_potential_hypotheses",
    "check_nonlinearity_hypotheses",
    "FunctionalValue",
    "FiberingScan",
    "energy",
    "energy_limit",
    "energy_lambda",
    "pohozaev",
    "pohozaev_limit",
    "pohozaev_lambda",
    "pohozaev_lambda_limit",
    "fibering_value",
    "fibering_derivative",
    "iip_gap",
    "fibering_scan",
    "NotInLambda",
    "BracketingFailed",
    "ProjectionResult",
    "in_lambda_set",
    "lambda_margin",
    "project_to_manifold",
    "reduced_energy",
    "reduced_gradient",
    "SolveResult",
    "SolverOptions",
    "LambdaSweep",
    "solve_ground_state",
    "solve_scalar_field_shooting",
    "kirchhoff_from_scalar_field",
    "dilate_with_grid",
    "ode_residual",
    "ode_residual_pointwise",
    "initial_iterate",
    "lambda_sweep",
    "mountain_pass_upper_bound",
]
