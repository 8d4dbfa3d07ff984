"""Work and heat exchanged between a single-photon pulse and a TLS.

Quantum side: exact amplitude dynamics of a two-level emitter absorbing
and re-emitting a decaying-exponential one-photon pulse, with the energy
flow split into work (dynamic level shift) and generalized heat
(absorption and emission), all decompositions exact at quadrature level.
Semiclassical side: the same emitter under a coherent pulse of identical
envelope, via the optical Bloch equations and linear response.  A
discretized-continuum propagator provides brute-force ground truth.
"""

from .analysis import (
    DetuningScan,
    EquivalenceReport,
    RegimeFlags,
    compare_equivalences,
    detuning_scan,
)
from .dynamics import (
    AmplitudeTrajectory,
    closed_form_psi,
    closed_form_trajectory,
    full_cycle_grid,
    integrate_psi,
)
from .effective import (
    AmplitudeBelowThreshold,
    EffectiveTrajectory,
    decay_rate,
    effective_trajectory,
    interaction_energy,
    stark_shift,
)
from .model import (
    PulseParams,
    SystemParams,
    TimeGrid,
    make_pulse,
    make_system,
    uniform_grid,
)
from .oracle import (
    GlobalState,
    ModeGrid,
    NormDriftError,
    OracleTrajectory,
    init_single_photon,
    make_mode_grid,
    oracle_grid,
    propagate,
)
from .pulse import PulseEnvelope, envelope_at, lab_envelope_at, normalization, spectrum_at
from .semiclassical import (
    BlochTrajectory,
    SemiclassicalReport,
    integrate_bloch,
    susceptibility,
    transition_frequency_eg,
    work_absorptive,
    work_reactive,
    work_total_and_decomposition,
)
from .thermo import (
    ThermoReport,
    heat_Q1,
    heat_decomposition,
    internal_energy,
    thermo_report,
    work_W1,
    work_decomposition,
)
from .cli import RunConfig, parse_config, run

__version__ = "0.1.0"

__all__ = [
    "AmplitudeBelowThreshold",
    "AmplitudeTrajectory",
    "BlochTrajectory",
    "DetuningScan",
    "EffectiveTrajectory",
    "EquivalenceReport",
    "GlobalState",
    "ModeGrid",
    "NormDriftError",
    "OracleTrajectory",
    "PulseEnvelope",
    "PulseParams",
    "RegimeFlags",
    "RunConfig",
    "SemiclassicalReport",
    "SystemParams",
    "ThermoReport",
    "TimeGrid",
    "closed_form_psi",
    "closed_form_trajectory",
    "compare_equivalences",
    "decay_rate",
    "detuning_scan",
    "effective_trajectory",
    "envelope_at",
    "full_cycle_grid",
    "heat_Q1",
    "heat_decomposition",
    "init_single_photon",
    "integrate_bloch",
    "integrate_psi",
    "interaction_energy",
    "internal_energy",
    "lab_envelope_at",
    "make_mode_grid",
    "make_pulse",
    "make_system",
    "normalization",
    "oracle_grid",
    "parse_config",
    "propagate",
    "run",
    "spectrum_at",
    "stark_shift",
    "susceptibility",
    "thermo_report",
    "transition_frequency_eg",
    "uniform_grid",
    "work_W1",
    "work_absorptive",
    "work_decomposition",
    "work_reactive",
    "work_total_and_decomposition",
]
