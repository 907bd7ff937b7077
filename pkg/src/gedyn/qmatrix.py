"""Dense complex-matrix helpers for qubit registers.

Matrices are plain ``numpy`` arrays. Qubit 0 is the most significant bit of
the basis label, so ``|q0 q1 ... q_{N-1}>`` maps to index
``q0 * 2**(N-1) + ... + q_{N-1}`` and ``np.kron(a, b)`` puts ``a`` on the
lower-numbered qubits.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

MAX_QUBITS = 12

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# sigma_minus lowers |1> (excited) to |0> (ground).
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T.copy()
for _m in (I2, SIGMA_X, SIGMA_Y, SIGMA_Z, SIGMA_MINUS, SIGMA_PLUS):
    _m.setflags(write=False)


class InvalidStateError(ValueError):
    """A matrix or vector violates a density-matrix / pure-state invariant."""


def num_qubits_of(dim: int) -> int:
    """Number of qubits for a register of dimension ``dim`` (a power of two)."""
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise InvalidStateError(f"dimension {dim} is not 2**N with N >= 1")
    if n > MAX_QUBITS:
        raise InvalidStateError(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return n


def check_qubit_count(n: int, minimum: int = 1) -> int:
    if not minimum <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [{minimum}, {MAX_QUBITS}], got {n}")
    return int(n)


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a (x) b``."""
    return np.kron(a, b)


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def kron_power(m: np.ndarray, n: int) -> np.ndarray:
    """``m`` tensored with itself ``n`` times."""
    return kron_all([m] * n)


def embed_operator(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Lift a 2x2 operator to act on ``qubit`` of an ``n``-qubit register."""
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n} qubits")
    return kron_all([op if q == qubit else I2 for q in range(n)])


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T))) <= tol


def check_density(rho: np.ndarray, psd_tol: float = PSD_TOL) -> int:
    """Validate a density matrix and return its qubit count.

    Raises
    ------
    InvalidStateError
        If ``rho`` is not square, not Hermitian, not unit trace or has an
        eigenvalue below ``-psd_tol``.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    n = num_qubits_of(rho.shape[0])
    herm_err = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_err > HERMITIAN_TOL:
        raise InvalidStateError(f"not Hermitian (max deviation {herm_err:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr:.15g}, expected 1")
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -psd_tol:
        raise InvalidStateError(f"not positive semidefinite (min eigenvalue {lo:.3e})")
    return n


def check_pure(psi: np.ndarray) -> int:
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise InvalidStateError(f"pure state must be a vector, got shape {psi.shape}")
    n = num_qubits_of(psi.shape[0])
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1) > NORM_TOL:
        raise InvalidStateError(f"state norm squared is {norm2:.15g}, expected 1")
    return n


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep``.

    The kept qubits appear in the order given, so ``keep=(1, 0)`` also swaps
    them.

    >>> bell = np.zeros((4, 4)); bell[np.ix_([0, 3], [0, 3])] = 0.5
    >>> partial_trace(bell, [0]).real
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    rho = np.asarray(rho)
    n = num_qubits_of(rho.shape[0])
    keep = [int(q) for q in keep]
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate qubits in keep={keep}")
    for q in keep:
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # Ket axes 0..n-1, bra axes n..2n-1; contract the traced pairs.
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    ket = list(letters[:n])
    bra = list(letters[n : 2 * n])
    for q in traced:
        bra[q] = ket[q]
    out = "".join(ket[q] for q in keep) + "".join(bra[q] for q in keep)
    red = np.einsum("".join(ket) + "".join(bra) + "->" + out, t)
    d = 2 ** len(keep)
    return red.reshape(d, d)


def eigenvalues_hermitian(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, in descending order."""
    m = np.asarray(m)
    if m.ndim != 2 or not is_hermitian(m):
        raise ValueError("eigenvalues_hermitian needs a square Hermitian matrix")
    return np.linalg.eigvalsh(m)[::-1]


def eigenvalues_general(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a square matrix, unordered."""
    try:
        return np.linalg.eigvals(np.asarray(m))
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigensolver failed: {exc}") from exc


def purity(rho: np.ndarray) -> float:
    """``Tr rho**2`` for a Hermitian ``rho``."""
    return float(np.sum(np.abs(rho) ** 2))
