"""Interferometric measurement arm.

The probe spin is tensor factor 0 with spin-up at index 0, prepared in
|+> = (|up> + |down>)/sqrt(2). A controlled-U writes the system eigenphase
onto the probe's relative phase; quadrature readout recovers it from the
probe's off-diagonal coherence. Only the argument of the coherence carries
information, so readouts report a unit-magnitude expectation.

Noise enters in two places: bounded jitter on the measured phase (uniform
law by default, the bound is the quantity of record) and a coherent
Hermitian perturbation of the evolution operator whose effect compounds
under powering.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import qcore
from .errors import ReadoutError, ValidationError
from .molham import MolecularHamiltonian

COHERENCE_TOL = 1e-6

JITTER_LAWS: dict[str, Callable[[np.random.Generator, float], float]] = {
    "uniform": lambda rng, bound: rng.uniform(-bound, bound),
}


@dataclass(frozen=True)
class ProbeReadout:
    """Unit-magnitude probe coherence and its phase as a fraction of a turn."""

    expectation: complex
    phase_fraction: float


@dataclass(frozen=True)
class NoiseModel:
    """Bounded measurement jitter plus a coherent operator perturbation.

    ``phase_jitter_bound`` is in fractions of a turn (5 degrees = 5/360);
    ``coherent_epsilon`` is the perturbation strength in hartree along
    ``perturbation_direction`` (unit max-norm Hermitian, default sigma_z).
    Both zero reproduces the ideal channel exactly.
    """

    phase_jitter_bound: float = 0.0
    coherent_epsilon: float = 0.0
    perturbation_direction: np.ndarray = field(default_factory=lambda: qcore.SIGMA_Z.copy())
    rng_seed: int = 0
    jitter_law: str | Callable[[np.random.Generator, float], float] = "uniform"

    def __post_init__(self):
        if self.phase_jitter_bound < 0:
            raise ValidationError(f"jitter bound must be >= 0, got {self.phase_jitter_bound}")
        if self.coherent_epsilon < 0:
            raise ValidationError(f"coherent epsilon must be >= 0, got {self.coherent_epsilon}")
        direction = qcore.require_hermitian(self.perturbation_direction, name="perturbation direction")
        peak = np.abs(direction).max()
        if abs(peak - 1.0) > 1e-9:
            raise ValidationError(f"perturbation direction must have unit max-norm, got {peak:.6f}")
        if isinstance(self.jitter_law, str) and self.jitter_law not in JITTER_LAWS:
            raise ValidationError(f"unknown jitter law {self.jitter_law!r}")
        object.__setattr__(self, "perturbation_direction", direction)

    def make_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)

    def draw_jitter(self, rng: np.random.Generator) -> float:
        """One jitter draw; always within +-phase_jitter_bound."""
        if self.phase_jitter_bound == 0.0:
            return 0.0
        law = JITTER_LAWS[self.jitter_law] if isinstance(self.jitter_law, str) else self.jitter_law
        draw = float(law(rng, self.phase_jitter_bound))
        if abs(draw) > self.phase_jitter_bound:
            raise ValidationError(
                f"jitter law produced {draw:.6e} outside +-{self.phase_jitter_bound:.6e}"
            )
        return draw


def controlled_u(u) -> np.ndarray:
    """|up><up| x I + |down><down| x U with the probe as the first factor."""
    m = qcore.require_unitary(u, name="controlled operator")
    d = m.shape[0]
    if 2 * d > qcore.MAX_DIM:
        raise ValidationError(f"system dimension {d} too large for a controlled gate")
    up = np.outer(qcore.KET_UP, qcore.KET_UP.conj())
    down = np.outer(qcore.KET_DOWN, qcore.KET_DOWN.conj())
    return np.kron(up, np.eye(d, dtype=complex)) + np.kron(down, m)


def probe_coherence(state) -> complex:
    """Off-diagonal element rho_probe[down, up] of the reduced probe state.

    Long operator chains drift in norm at the 1e-12 level, so the
    normalization check here is relaxed to 1e-9; the extracted phase does
    not depend on the norm.
    """
    s = qcore.require_pure_state(state, "joint state", tol=1e-9)
    if s.size % 2 != 0:
        raise ValidationError(f"joint state dimension {s.size} is not probe x system")
    d = s.size // 2
    return complex(np.vdot(s[:d], s[d:]))


def coherence_from_density(rho) -> complex:
    """Same coherence extracted from a two-qubit density matrix."""
    reduced = qcore.partial_trace(rho, keep=0)
    return complex(reduced[1, 0])


def ideal_readout(state) -> ProbeReadout:
    """Extract the probe phase; the system must retain coherence.

    For (|up> + e^{i 2 pi phi} |down>)/sqrt(2) x |psi> this returns
    exactly phi.
    """
    z = probe_coherence(state)
    if abs(z) < COHERENCE_TOL:
        raise ReadoutError(f"probe coherence {abs(z):.3e} below {COHERENCE_TOL:.1e}; phase undefined")
    z_norm = z / abs(z)
    phase = (np.angle(z_norm) / (2.0 * np.pi)) % 1.0
    return ProbeReadout(expectation=complex(z_norm), phase_fraction=float(phase))


def noisy_readout(state, noise: NoiseModel, rng: np.random.Generator | None = None) -> ProbeReadout:
    """Ideal readout plus one jitter draw, reduced mod 1.

    Deterministic given ``noise.rng_seed`` and the draw index; pass a
    persistent ``rng`` to take successive draws from one stream.
    """
    clean = ideal_readout(state)
    if rng is None:
        rng = noise.make_rng()
    phase = (clean.phase_fraction + noise.draw_jitter(rng)) % 1.0
    return ProbeReadout(expectation=complex(np.exp(2j * np.pi * phase)), phase_fraction=float(phase))


def perturbed_u(h: MolecularHamiltonian, tau: float, noise: NoiseModel) -> np.ndarray:
    """exp(-i (H + eps V) tau); eps = 0 reproduces the ideal operator exactly."""
    if tau <= 0:
        raise ValidationError(f"tau must be positive, got {tau}")
    if noise.perturbation_direction.shape != h.matrix.shape:
        raise ValidationError(
            f"perturbation direction dim {noise.perturbation_direction.shape[0]} "
            f"does not match Hamiltonian dim {h.dim}"
        )
    return qcore.expm_herm(h.matrix + noise.coherent_epsilon * noise.perturbation_direction, tau)


@dataclass(frozen=True)
class SpectrumTrace:
    """Complex absorption/dispersion trace on a uniform frequency grid (Hz)."""

    frequencies: np.ndarray
    complex_amplitudes: np.ndarray
    reference_phase: float = 0.0

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        a = np.asarray(self.complex_amplitudes, dtype=complex)
        if f.size != a.size:
            raise ValidationError(f"grid length {f.size} != amplitude length {a.size}")
        df = np.diff(f)
        if f.size > 1 and (df.min() <= 0 or abs(df.max() - df.min()) > 1e-9 * max(abs(df.max()), 1.0)):
            raise ValidationError("frequency grid must be strictly ascending and uniformly spaced")
        f.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "complex_amplitudes", a)

    def line_integral(self) -> complex:
        df = float(self.frequencies[1] - self.frequencies[0]) if self.frequencies.size > 1 else 1.0
        return complex(self.complex_amplitudes.sum() * df)

    def csv_text(self) -> str:
        """Export as CSV: frequency_hz, amplitude_re, amplitude_im."""
        lines = ["frequency_hz,amplitude_re,amplitude_im"]
        for f, a in zip(self.frequencies, self.complex_amplitudes):
            lines.append(f"{f:.17g},{a.real:.17g},{a.imag:.17g}")
        return "\n".join(lines) + "\n"


def synthesize_spectrum(
    phase_fraction: float,
    line_width: float = 2.0,
    j_coupling: float = 214.6,
    points: int = 4096,
    spectral_width: float = 2000.0,
) -> SpectrumTrace:
    """Two-line doublet at +-J/2 Hz whose common phase is 2 pi phi.

    A decaying quadrature oscillation is Fourier-transformed so the complex
    line integral's argument recovers 2 pi phi; phi = 0 gives pure
    absorption, phi = 0.25 pure dispersion.
    """
    if points < 256 or points & (points - 1) != 0:
        raise ValidationError(f"points must be a power of two >= 256, got {points}")
    if line_width <= 0:
        raise ValidationError(f"line width must be positive, got {line_width}")
    if spectral_width <= j_coupling:
        raise ValidationError(
            f"spectral width {spectral_width} Hz must exceed the J coupling {j_coupling} Hz"
        )
    t = np.arange(points) / spectral_width
    fid = (
        np.exp(2j * np.pi * phase_fraction)
        * (np.exp(1j * np.pi * j_coupling * t) + np.exp(-1j * np.pi * j_coupling * t))
        * np.exp(-np.pi * line_width * t)
    )
    amps = np.fft.fftshift(np.fft.fft(fid))
    freqs = np.fft.fftshift(np.fft.fftfreq(points, d=1.0 / spectral_width))
    return SpectrumTrace(frequencies=freqs, complex_amplitudes=amps, reference_phase=0.0)


def extract_phase_from_spectrum(trace: SpectrumTrace, reference: SpectrumTrace) -> float:
    """Phase of one trace against a reference sharing its frequency grid."""
    if trace.frequencies.size != reference.frequencies.size or not np.allclose(
        trace.frequencies, reference.frequencies, atol=1e-9
    ):
        raise ValidationError("trace and reference frequency grids differ")
    ref = reference.line_integral()
    if abs(ref) < 1e-9:
        raise ReadoutError(f"reference line integral {abs(ref):.3e} below 1e-9")
    ratio = trace.line_integral() / ref
    return float((np.angle(ratio) / (2.0 * np.pi)) % 1.0)
