"""Shared fixtures and oracle values.

The frozen constants below were computed from the closed-form 2x2
eigenvalues of the built-in hydrogen matrix: E = mean -+ hypot(delta, H12)
with mean = (H11 + H22)/2 and delta = (H11 - H22)/2, and from
tau = pi / (2 * hypot(delta, H12)).
"""
import numpy as np
import pytest

from molphase import molham

# closed-form oracle values for the built-in hydrogen system
H2_GROUND_ENERGY = -1.8515709293511877
H2_EXCITED_ENERGY = -0.23312907064881216
H2_TAU = 1.9411217256260538
H2_PHASE = 0.5720226894142891          # (-E0 * tau / 2pi) mod 1
H2_CLIPPED_PHASE_0 = 0.5581338005254003  # phase - 5/360
ERRBD_5DEG = 5.0 / 360.0
JITTER_FINAL_BOUND = ERRBD_5DEG * 8.0**-5  # ~4.2386e-7


@pytest.fixture
def h2():
    return molham.build_h2()


def random_hermitian(rng, dim=2):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0


def random_unitary(rng, dim=2):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_negative_hamiltonian(rng):
    """Random 2x2 Hamiltonian with both energies negative and gap > 0.25.

    The shift keeps the automatic tau valid (|E0| tau < 2 pi) and the
    ground phase well inside (0, 1), the algorithm's operating regime.
    """
    while True:
        m = random_hermitian(rng)
        vals = np.linalg.eigvalsh(m)
        if vals[1] - vals[0] > 0.25:
            return molham.MolecularHamiltonian(
                m - (vals[1] + 0.2) * np.eye(2), label="random"
            )
