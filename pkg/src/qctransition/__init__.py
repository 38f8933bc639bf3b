"""Classical-to-quantum transition dynamics on a 1D grid.

A nonlinear wave equation with a tunable degree of quantumness epsilon
interpolates between classical Hamilton-Jacobi transport (epsilon = 0) and
standard quantum mechanics (epsilon = 1).  The package integrates it
numerically, evaluates the matching closed-form interference solution, and
compares the two.
"""

__version__ = "0.1.0"

from .analysis import (
    RETARDATION_NEVER,
    ComparisonReport,
    ConvergenceLevel,
    ConvergenceStudy,
    ExperimentSetup,
    PanelResult,
    SweepItem,
    convergence_orders,
    convergence_study,
    epsilon_sweep,
    l2_error,
    linf_error,
    measured_visibility,
    reference_density,
    retardation_curve,
    simulate_panel,
)
from .analytic import (
    AnalyticState,
    FringeVisibility,
    TwoGaussianConfig,
    analytic_visibility,
    density_at,
    fringe_visibility,
    initial_state,
    normalization_constant,
    visibility_from_samples,
    wavefunction_at,
)
from .madelung import (
    HydroFields,
    bohm_velocity,
    classicality_potential_term,
    continuity_residual,
    hj_residual,
    hydro_fields,
    integrate_trajectory,
    map_to_scaled,
    polar_decompose,
    quantum_potential,
)
from .solver import (
    SCHEME_ID,
    RunResult,
    SolverConfig,
    SolverFailure,
    evolve,
    rhs,
    stability_dt,
    step,
)
from .wavefield import (
    ComplexField,
    DensityProfile,
    Grid1D,
    PolarField,
    Provenance,
    SimParams,
    density,
    make_grid,
    norm,
    trapezoid,
)

__all__ = [
    "__version__",
    "RETARDATION_NEVER",
    "ComparisonReport",
    "ConvergenceLevel",
    "ConvergenceStudy",
    "ExperimentSetup",
    "PanelResult",
    "SweepItem",
    "convergence_orders",
    "convergence_study",
    "epsilon_sweep",
    "l2_error",
    "linf_error",
    "measured_visibility",
    "reference_density",
    "retardation_curve",
    "simulate_panel",
    "AnalyticState",
    "FringeVisibility",
    "TwoGaussianConfig",
    "analytic_visibility",
    "density_at",
    "fringe_visibility",
    "initial_state",
    "normalization_constant",
    "visibility_from_samples",
    "wavefunction_at",
    "HydroFields",
    "bohm_velocity",
    "classicality_potential_term",
    "continuity_residual",
    "hj_residual",
    "hydro_fields",
    "integrate_trajectory",
    "map_to_scaled",
    "polar_decompose",
    "quantum_potential",
    "SCHEME_ID",
    "RunResult",
    "SolverConfig",
    "SolverFailure",
    "evolve",
    "rhs",
    "stability_dt",
    "step",
    "ComplexField",
    "DensityProfile",
    "Grid1D",
    "PolarField",
    "Provenance",
    "SimParams",
    "density",
    "make_grid",
    "norm",
    "trapezoid",
]
