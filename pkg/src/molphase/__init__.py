"""molphase: molecular ground-state energies by iterative phase estimation.

A small-system simulator of the full measurement pipeline: adiabatic
preparation of the molecular ground state, controlled-U interferometry on
a probe spin, clipped-phase iteration with recursive bit reconstruction,
bounded-noise and coherent-error models, and a pulse-level two-spin NMR
backend verified against the exact gates.
"""
from .asp import AdiabaticSchedule, ASPResult, interpolated_hamiltonian, run_asp, scan_total_time, trotter_step
from .errors import (
    CompilationError,
    ComputationError,
    DegeneracyError,
    MolphaseError,
    ParseError,
    ReadoutError,
    TauRangeError,
    ValidationError,
)
from .ipea import (
    EnergyResult,
    IpeaResult,
    IterationConfig,
    IterationRecord,
    PhaseEstimate,
    energy_from_phase,
    initial_operator,
    next_operator,
    oracle_phase,
    phase_distance,
    precision_report,
    reconstruct,
    run_ipea,
    to_binary,
)
from .molham import (
    EnergySpectrum,
    MolecularHamiltonian,
    build_h2,
    choose_tau,
    load_hamiltonian,
    serialize_hamiltonian,
    spectrum,
)
from .nmrpulse import (
    DelayEvent,
    PulseEvent,
    PulseSequence,
    SpinSystem,
    compile_controlled_u,
    evolve_sequence,
    nmr_hamiltonian,
    prepare_pps,
    run_pulse_backend,
    sequence_text,
)
from .probe import (
    NoiseModel,
    ProbeReadout,
    SpectrumTrace,
    controlled_u,
    extract_phase_from_spectrum,
    ideal_readout,
    noisy_readout,
    perturbed_u,
    synthesize_spectrum,
)
from .qcore import (
    EigenDecomposition,
    expm_herm,
    hermitian_eig,
    partial_trace,
    state_fidelity,
    tensor,
)

__version__ = "0.1.0"
