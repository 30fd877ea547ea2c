"""Porous-medium Keller-Segel system with volume filling and its m -> infinity limit, in 1-D."""

from .config import RunConfig, load_config, parse_config, preset
from .diagnostics import (
    DiagnosticsRecord,
    KineticGrid,
    complementarity_residual,
    kinetic_two_valued_metric,
    mu_profile,
    pressure_sup_bound_check,
    record_diagnostics,
)
from .elliptic import solve_chemo
from .errors import (
    ConfigurationError,
    InvariantViolation,
    NumericalFailure,
    StepRejected,
    StiffPressError,
)
from .grid import Grid1D, build_grid, cell_divergence, face_gradient, norm
from .hyperbolic import run_hyperbolic, step_hyperbolic
from .pme import run_pme, step_pme
from .state import ModelParams, SimState, compute_pressure, make_state, stable_dt
from .timeloop import RunResult

__version__ = "0.1.0"
