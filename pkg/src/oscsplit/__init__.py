"""Filtered splitting and two-step trigonometric integrators for highly
oscillatory wave systems, with an exact spectral reference solver, a filter
admissibility verifier, and a convergence/resonance experiment harness."""

__version__ = "0.1.0"

from .config import (
    ConfigError,
    MaxwellProblem,
    build_problem,
    kg_desk_config,
    kg_interaction_config,
    load_config,
    load_problem,
    maxwell_desk_config,
)
from .experiments import (
    ErrorRecord,
    SweepConfig,
    TauPoint,
    emit_csv,
    estimate_order,
    load_records,
    log_tau_grid,
    resonance_tau_grid,
    run_sweep,
)
from .filters import (
    FilterSet,
    TwoStepFilterPair,
    chi,
    cosc,
    eta,
    eval_on_omega,
    filter_set,
    sinc,
    two_step_family,
    verify_conditions,
)
from .integrators import (
    BlowUpError,
    StepContext,
    kg_two_step,
    kg_two_step_first,
    kg_two_step_run,
    make_context,
    oscillation_block,
    perturbed_initial_velocity,
    triple_split_run,
    triple_split_step,
    two_step_first,
    two_step_run,
    two_step_step,
)
from .model import (
    DensityProfile,
    DiscreteOperators,
    Grid1D,
    KGProblem,
    OmegaMatrix,
    PulseConfig,
    State,
    build_kg_problem,
    build_omega,
    build_yee_operators,
    hamiltonian,
    laser_pulse_initial,
    pulse_field,
    pulse_velocity,
    smooth_cutoff,
    validate_assumptions,
)
from .reference import SpectralOracle, StatePropagator, build_oracle, exact_e, exact_state
