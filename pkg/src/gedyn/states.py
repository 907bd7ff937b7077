"""GHZ and W initial states."""

from __future__ import annotations

import numpy as np

from .qmatrix import check_pure, check_qubit_count


def ghz_state(n: int) -> np.ndarray:
    """``(|0...0> + |1...1>) / sqrt(2)`` on ``n`` qubits."""
    n = check_qubit_count(n, minimum=2)
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return psi


def w_state(n: int) -> np.ndarray:
    """Equal-weight superposition of the ``n`` single-excitation basis states."""
    n = check_qubit_count(n, minimum=2)
    psi = np.zeros(2**n, dtype=complex)
    psi[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return psi


def basis_state(bits: str) -> np.ndarray:
    """Computational basis ket, e.g. ``basis_state("010")``."""
    n = check_qubit_count(len(bits))
    psi = np.zeros(2**n, dtype=complex)
    psi[int(bits, 2)] = 1
    return psi


def density_from_pure(psi: np.ndarray) -> np.ndarray:
    """Projector ``|psi><psi|``."""
    psi = np.asarray(psi, dtype=complex)
    check_pure(psi)
    return np.outer(psi, psi.conj())
