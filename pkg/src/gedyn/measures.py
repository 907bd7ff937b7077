"""Global entanglement, concurrence and N-concurrence.

Mixed-state global entanglement is only reached through tangles: for the
W family ``E = (N - 1) C_2**2`` of any pair, for GHZ ``E = C_N**2``.

The concurrence numbers ``lambda_i`` are the square roots of the spectrum of
``R = rho S rho* S`` with ``S = sigma_y^{(x)N}``. Rather than diagonalizing
the non-Hermitian ``R`` (defective on product states, where eigensolver noise
of order 1e-8 turns into 1e-4 after the square root), we factor
``rho = A A^dagger`` and take the singular values of ``A^dagger S A*``, which
are the same numbers and come out accurate to machine precision.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .qmatrix import (
    HERMITIAN_TOL,
    PSD_TOL,
    SIGMA_Y,
    TRACE_TOL,
    InvalidStateError,
    check_pure,
    kron_power,
    num_qubits_of,
)


@dataclass(frozen=True)
class InformationBudget:
    i_total: float
    i_local: float
    i_nonlocal: float


def single_qubit_reductions(psi: np.ndarray) -> list[np.ndarray]:
    """One-qubit reduced density matrices of a pure state, qubit 0 first."""
    n = check_pure(psi)
    out = []
    for q in range(n):
        t = psi.reshape(2**q, 2, 2 ** (n - q - 1))
        out.append(np.einsum("iaj,ibj->ab", t, t.conj()))
    return out


def _purities(psi: np.ndarray) -> np.ndarray:
    return np.array([np.sum(np.abs(r) ** 2) for r in single_qubit_reductions(psi)])


def mw_global_entanglement(psi: np.ndarray) -> float:
    """Meyer-Wallach measure ``(2/N) sum_i (1 - Tr rho_i**2)`` of a pure state."""
    psi = np.asarray(psi, dtype=complex)
    n = check_pure(psi)
    if n < 2:
        raise ValueError("global entanglement needs at least two qubits")
    return float(2.0 / n * np.sum(1.0 - _purities(psi)))


def information_budget(psi: np.ndarray) -> InformationBudget:
    """Split the ``N`` bits of a pure state into local and non-local parts."""
    psi = np.asarray(psi, dtype=complex)
    n = check_pure(psi)
    pur = _purities(psi)
    return InformationBudget(
        i_total=float(n),
        i_local=float(np.sum(2 * pur - 1)),
        i_nonlocal=float(np.sum(2 * (1 - pur))),
    )


def _parity_signs(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    pop = np.zeros_like(idx)
    for q in range(n):
        pop += (idx >> q) & 1
    return 1 - 2 * (pop & 1)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """``S rho* S`` with ``S = sigma_y^{(x)N}``, without building ``S``.

    ``S |x> = i**N (-1)**|x| |~x>``, so the flip reverses both indices and
    multiplies entry ``(u, v)`` by the parity signs of ``u`` and ``v``.
    """
    n = num_qubits_of(rho.shape[0])
    s = _parity_signs(n)
    return np.outer(s, s) * rho.conj()[::-1, ::-1]


def r_matrix(rho: np.ndarray) -> np.ndarray:
    """``rho S rho* S`` built with an explicit Kronecker power of ``sigma_y``."""
    n = num_qubits_of(rho.shape[0])
    s = kron_power(SIGMA_Y, n)
    return rho @ s @ rho.conj() @ s


def _flip_blocks(rho: np.ndarray) -> list[np.ndarray]:
    """Index sets on which both ``rho`` and the spin flip are block diagonal.

    Uses the exact-zero pattern of ``rho``; a dense matrix is a single block.
    """
    d = rho.shape[0]
    rows, cols = np.nonzero(rho)
    if rows.size == d * d:
        return [np.arange(d)]
    idx = np.arange(d)
    rows = np.concatenate([rows, idx])
    cols = np.concatenate([cols, idx[::-1]])
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(d, d))
    _, labels = connected_components(graph, directed=False)
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, splits)


def flipped_singular_values(rho: np.ndarray) -> np.ndarray:
    """Square roots of the spectrum of ``R = rho S rho* S``, descending.

    Raises
    ------
    InvalidStateError
        If ``rho`` is not a Hermitian, unit-trace, positive semidefinite
        register state.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    n = num_qubits_of(rho.shape[0])
    signs = _parity_signs(n)

    by_size: dict[int, list[np.ndarray]] = defaultdict(list)
    for block in _flip_blocks(rho):
        by_size[block.size].append(block)

    # Every nonzero entry and its transpose partner lie inside one block, so
    # checking the blocks checks the whole matrix.
    subs = {}
    trace = 0.0
    for k, blocks in by_size.items():
        index = np.stack(blocks)  # (m, k), each row sorted ascending
        sub = rho[index[:, :, None], index[:, None, :]]
        if np.max(np.abs(sub - sub.conj().transpose(0, 2, 1))) > HERMITIAN_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        trace += np.trace(sub, axis1=1, axis2=2).sum()
        subs[k] = (index, sub)
    if abs(trace - 1) > TRACE_TOL:
        raise InvalidStateError(f"density matrix trace is {trace:.15g}")

    values = []
    for index, sub in subs.values():
        sub = 0.5 * (sub + sub.conj().transpose(0, 2, 1))
        w, v = np.linalg.eigh(sub)
        if w.min() < -PSD_TOL:
            raise InvalidStateError(f"density matrix has eigenvalue {w.min():.3e} < 0")
        a = v * np.sqrt(np.clip(w, 0.0, None))[:, None, :]
        # Blocks are closed under u -> ~u, which reverses order, so the
        # partner of position j in a sorted block sits at position k-1-j.
        flipped = a.conj()[:, ::-1, :] * signs[index[:, ::-1]][:, :, None]
        m = a.conj().transpose(0, 2, 1) @ flipped
        values.append(np.linalg.svd(m, compute_uv=False).ravel())
    return np.sort(np.concatenate(values))[::-1]


def _concurrence_from(lams: np.ndarray) -> float:
    return float(max(lams[0] - np.sum(lams[1:]), 0.0))


def concurrence_2q(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence_2q needs a 4x4 matrix, got {rho.shape}")
    return _concurrence_from(flipped_singular_values(rho))


def n_concurrence(rho: np.ndarray) -> float:
    """N-concurrence ``max(l1 - l2 - ... - l_{2^N}, 0)`` for an even number of qubits."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits_of(rho.shape[0])
    if n % 2:
        raise ValueError(f"N-concurrence is defined for even qubit counts only, got N={n}")
    return _concurrence_from(flipped_singular_values(rho))


def ge_w_tangle_route(rho_pair: np.ndarray, n_total: int) -> float:
    """``(N - 1) tau_2`` from the pairwise reduction of a W-type state."""
    if n_total < 2:
        raise ValueError(f"need at least two qubits, got {n_total}")
    return (n_total - 1) * concurrence_2q(rho_pair) ** 2


def ge_ghz_tangle_route(rho: np.ndarray) -> float:
    """``C_N**2`` for a GHZ-type register state."""
    return n_concurrence(rho) ** 2
