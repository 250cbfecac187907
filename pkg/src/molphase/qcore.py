"""Dense complex linear algebra for one to three qubits.

Everything here is exact eigendecomposition-based arithmetic on small
(dim <= 8) matrices: no sparsity, no iterative solvers. All functions are
pure and all arrays returned are freshly allocated, so concurrent use is
safe.

Conventions: basis index 0 is spin-up, matrices are row-major ndarrays of
complex128, and eigenvalues are always sorted ascending.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

MAX_DIM = 8

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

KET_UP = np.array([1, 0], dtype=complex)
KET_DOWN = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
STATE_NORM_TOL = 1e-12


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex matrix of dim <= 8 with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if not 1 <= m.shape[0] <= MAX_DIM:
        raise ValidationError(f"{name} dimension {m.shape[0]} outside 1..{MAX_DIM}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValidationError(f"{name} contains non-finite entries")
    return m


def require_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity to ``tol`` (max-norm), naming the worst entry pair."""
    m = as_complex_matrix(a, name)
    dev = np.abs(m - m.conj().T)
    worst = np.unravel_index(np.argmax(dev), dev.shape)
    if dev[worst] > tol:
        i, j = worst
        raise ValidationError(
            f"{name} is not Hermitian: |A[{i}][{j}] - conj(A[{j}][{i}])| = {dev[worst]:.3e} > {tol:.1e}"
        )
    return m


def require_unitary(a, tol: float = UNITARY_TOL, name: str = "matrix") -> np.ndarray:
    """Validate unitarity, max-norm of U†U - I below ``tol``."""
    m = as_complex_matrix(a, name)
    dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
    if dev > tol:
        raise ValidationError(f"{name} is not unitary: max|U†U - I| = {dev:.3e} > {tol:.1e}")
    return m


def require_pure_state(v, name: str = "state", tol: float = STATE_NORM_TOL) -> np.ndarray:
    """Validate a normalized complex state vector."""
    s = np.asarray(v, dtype=complex).ravel()
    if not 2 <= s.size <= MAX_DIM:
        raise ValidationError(f"{name} dimension {s.size} outside 2..{MAX_DIM}")
    if not np.all(np.isfinite(s.view(float))):
        raise ValidationError(f"{name} contains non-finite amplitudes")
    norm_err = abs(np.vdot(s, s).real - 1.0)
    if norm_err > tol:
        raise ValidationError(f"{name} is not normalized: |<s|s> - 1| = {norm_err:.3e}")
    return s


def require_density_matrix(a, name: str = "rho") -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, positive to 1e-10."""
    m = require_hermitian(a, name=name)
    tr_err = abs(np.trace(m).real - 1.0)
    if tr_err > 1e-12 or abs(np.trace(m).imag) > 1e-12:
        raise ValidationError(f"{name} trace deviates from 1 by {tr_err:.3e}")
    lo = np.linalg.eigvalsh(m)[0]
    if lo < -1e-10:
        raise ValidationError(f"{name} has negative eigenvalue {lo:.3e}")
    return m


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0].copy()

    def reconstruct(self) -> np.ndarray:
        """V diag(lambda) V†, for residual checks against the input."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, deterministic for fixed input."""
    m = require_hermitian(h)
    vals, vecs = np.linalg.eigh(m)
    vals.flags.writeable = False
    vecs.flags.writeable = False
    return EigenDecomposition(vals, vecs)


def expm_herm(h, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition (exactly unitary)."""
    if not np.isfinite(t):
        raise ValidationError(f"evolution time must be finite, got {t}")
    dec = hermitian_eig(h)
    v = dec.eigenvectors
    return (v * np.exp(-1j * dec.eigenvalues * t)) @ v.conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product; joint dimension must stay within three qubits."""
    ma = as_complex_matrix(a, "left factor")
    mb = as_complex_matrix(b, "right factor")
    dim = ma.shape[0] * mb.shape[0]
    if dim > MAX_DIM:
        raise ValidationError(f"tensor dimension {dim} exceeds {MAX_DIM}")
    return np.kron(ma, mb)


def partial_trace(rho, keep: int) -> np.ndarray:
    """Reduced 2x2 density matrix of one qubit of a two-qubit state.

    ``keep=0`` keeps the first tensor factor, ``keep=1`` the second.
    """
    m = require_density_matrix(rho)
    if m.shape[0] != 4:
        raise ValidationError(f"partial_trace expects a two-qubit matrix, got dim {m.shape[0]}")
    if keep not in (0, 1):
        raise ValidationError(f"subsystem index must be 0 or 1, got {keep}")
    r = m.reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("ijkj->ik", r)
    return np.einsum("jijk->ik", r)


def state_fidelity(a, b) -> float:
    """|<a|b>|^2 between two pure states of equal dimension."""
    sa = require_pure_state(a, "first state")
    sb = require_pure_state(b, "second state")
    if sa.size != sb.size:
        raise ValidationError(f"state dimensions differ: {sa.size} vs {sb.size}")
    return float(abs(np.vdot(sa, sb)) ** 2)
