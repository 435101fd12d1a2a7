"""vpsim: a 1+1 dimensional semi-Lagrangian Vlasov-Poisson solver.

Two interchangeable transport backends (discontinuous Galerkin of arbitrary
order and periodic cubic-spline interpolation) under Lie/Strang operator
splitting, a spectral Poisson solver, and a diagnostics engine tracking
charge, current, energy, entropy, and the L1/L2 norms.
"""

from .grid import (CellBasis, ConfigurationError, DistributionField, DG_NODES,
                   EQUIDISTANT, PhaseSpaceGrid, SPLINE, legendre_to_nodes,
                   make_basis, nodes_to_legendre)
from .dg import ShiftOperator, advect_row, advect_v, advect_x, build_shift
from .spline import (PeriodicSpline, advect_row_spline, advect_v_spline,
                     advect_x_spline, build_spline, eval_spline)
from .fields import (ChargeDensity, ElectricField1D, NeutralityError,
                     compute_field, density, dg_to_equidistant,
                     equidistant_to_dg, poisson_equidistant, resample_periodic,
                     solve_poisson)
from .stepping import RunResult, StepperState, initial_state, run, step
from .diagnostics import (InvariantRecord, entropy_violations, error_series,
                          fit_damping_rate, invariants, l2_increase_count,
                          positivity_l1_violations, recurrence_time)
from .scenarios import (EchoKick, FilterSettings, ScenarioConfig, SCENARIOS,
                        apply_echo_kick, filament_filter, initial_condition,
                        make_echo_event, make_filter_hook, scenario)

__version__ = "0.1.0"

__all__ = [
    "CellBasis", "ConfigurationError", "DistributionField", "DG_NODES",
    "EQUIDISTANT", "PhaseSpaceGrid", "SPLINE", "legendre_to_nodes",
    "make_basis", "nodes_to_legendre",
    "ShiftOperator", "advect_row", "advect_v", "advect_x", "build_shift",
    "PeriodicSpline", "advect_row_spline", "advect_v_spline",
    "advect_x_spline", "build_spline", "eval_spline",
    "ChargeDensity", "ElectricField1D", "NeutralityError", "compute_field",
    "density", "dg_to_equidistant", "equidistant_to_dg",
    "poisson_equidistant", "resample_periodic", "solve_poisson",
    "RunResult", "StepperState", "initial_state", "run", "step",
    "InvariantRecord", "entropy_violations", "error_series",
    "fit_damping_rate", "invariants", "l2_increase_count",
    "positivity_l1_violations", "recurrence_time",
    "EchoKick", "FilterSettings", "ScenarioConfig", "SCENARIOS",
    "apply_echo_kick", "filament_filter", "initial_condition",
    "make_echo_event", "make_filter_hook", "scenario",
    "__version__",
]
