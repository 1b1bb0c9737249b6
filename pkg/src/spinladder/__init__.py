"""Coherent reversal of a uniaxial spin S across its anisotropy barrier by a
ladder of simultaneous resonant circularly polarised drives."""

__version__ = "0.1.0"

from .analysis import (
    ObservableSeries,
    PeriodEstimate,
    SweepRow,
    compare_series,
    leakage,
    observables,
    reversal_period,
    sweep,
)
from .config import SimulationConfig, config_to_text, parse_config, run_simulation
from .hamiltonian import (
    BarrierProfile,
    DriveSpec,
    StaticModel,
    barrier_profile,
    drive_coefficients,
    eval_f,
    lab_hamiltonian,
    level_energy,
    rotating_hamiltonian,
    transition_frequency,
)
from .integrator import (
    ConvergenceError,
    IntegratorConfig,
    Trajectory,
    convergence_report,
    evolve,
    step_exponential_midpoint,
    step_rk4,
)
from .protocols import (
    DriveProtocol,
    full_gqoab_protocol,
    ladder_protocol,
    pi_pulse_duration,
    rabi_protocol,
    single_resonance_protocol,
)
from .spin import (
    SpinOperatorSet,
    SpinQuantumNumber,
    basis_state,
    expectation,
    hermitian_eigendecomposition,
    make_operators,
)
