"""Analytic evolved states and global-entanglement curves.

Curve functions take ``gamma_t`` (the figures' x axis); density-matrix
builders take ``p = exp(-gamma t)`` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelKind, check_p
from .qmatrix import check_qubit_count

T_SEP_TOL = 1e-9


def _check_n(n: int) -> int:
    if n < 2:
        raise ValueError(f"need at least two qubits, got {n}")
    return int(n)


def w_pair_density(kind: ChannelKind | str, n: int, p: float) -> np.ndarray:
    """Two-qubit reduction of an ``n``-qubit W state after local decoherence."""
    kind = ChannelKind.parse(kind)
    n = _check_n(n)
    p = check_p(p)
    rho = np.zeros((4, 4))
    if kind is ChannelKind.DISSIPATIVE:
        rho[0, 0] = (n - 2 * p) / n
        rho[1, 1] = rho[2, 2] = rho[1, 2] = rho[2, 1] = p / n
    elif kind is ChannelKind.DEPHASING:
        rho[0, 0] = (n - 2) / n
        rho[1, 1] = rho[2, 2] = 1 / n
        rho[1, 2] = rho[2, 1] = p / n
    else:
        singlet_part = np.zeros((4, 4))
        singlet_part[0, 0] = singlet_part[3, 3] = (1 - p**2) / 4
        singlet_part[1, 1] = singlet_part[2, 2] = (1 + p**2) / 4
        singlet_part[1, 2] = singlet_part[2, 1] = p**2 / 2
        ground_part = np.diag(
            [(1 + p) ** 2 / 4, (1 - p**2) / 4, (1 - p**2) / 4, (1 - p) ** 2 / 4]
        )
        rho = 2 / n * singlet_part + (n - 2) / n * ground_part
    return rho.astype(complex)


@dataclass(frozen=True)
class GhzDiagonalCoefficients:
    """Populations of the decohered GHZ state, indexed by excitation number.

    ``weights[z]`` is the coefficient multiplying every basis projector with
    ``z`` ones; the density matrix carries an overall factor of 1/2.
    """

    kind: ChannelKind
    p: float
    n: int
    weights: np.ndarray

    @classmethod
    def compute(cls, kind: ChannelKind | str, n: int, p: float) -> "GhzDiagonalCoefficients":
        kind = ChannelKind.parse(kind)
        p = check_p(p)
        z = np.arange(n + 1)
        if kind is ChannelKind.DISSIPATIVE:
            # 0**z with 0**0 == 1: only |0...0> picks up the relaxed half.
            weights = p**z * (1 - p) ** (n - z) + (z == 0)
        elif kind is ChannelKind.NOISY:
            weights = ((1 + p) ** z * (1 - p) ** (n - z) + (1 - p) ** z * (1 + p) ** (n - z)) / 2**n
        else:
            raise ValueError("GHZ diagonal coefficients are defined for dissipative and noisy only")
        return cls(kind, p, n, weights.astype(float))

    def total(self) -> float:
        """Sum of the weight over all ``2**n`` basis strings (2 for a valid state)."""
        binom = np.array([math.comb(self.n, z) for z in range(self.n + 1)], dtype=float)
        return float(binom @ self.weights)


def _excitations(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    z = np.zeros_like(idx)
    for q in range(n):
        z += (idx >> q) & 1
    return z


def ghz_density(kind: ChannelKind | str, n: int, p: float) -> np.ndarray:
    """Full register state of an ``n``-qubit GHZ state after local decoherence."""
    kind = ChannelKind.parse(kind)
    n = check_qubit_count(n, minimum=2)
    p = check_p(p)
    d = 2**n
    rho = np.zeros((d, d), dtype=complex)
    if kind is ChannelKind.DEPHASING:
        rho[0, 0] = rho[-1, -1] = 0.5
        coherence = p ** (n / 2)
    else:
        coeffs = GhzDiagonalCoefficients.compute(kind, n, p)
        rho[np.diag_indices(d)] = 0.5 * coeffs.weights[_excitations(n)]
        coherence = p ** (n / 2) if kind is ChannelKind.DISSIPATIVE else p**n
    rho[0, -1] = rho[-1, 0] = 0.5 * coherence
    return rho


def _noisy_w_bracket(n: int, p: float) -> float:
    return 4 * p**2 - math.sqrt(1 - p**2) * math.sqrt(n**2 - (p * n - 4 * p) ** 2)


def w_ge_closed(kind: ChannelKind | str, n: int, gamma_t: float) -> float:
    """Global entanglement of the decohered W state at time ``gamma_t``."""
    kind = ChannelKind.parse(kind)
    n = _check_n(n)
    if gamma_t < 0:
        raise ValueError(f"gamma_t must be nonnegative, got {gamma_t}")
    if kind is ChannelKind.NOISY:
        p = math.exp(-gamma_t)
        return (n - 1) / (4 * n**2) * max(_noisy_w_bracket(n, p), 0.0) ** 2
    return 4 * (n - 1) / n**2 * math.exp(-2 * gamma_t)


def ghz_ge_dephasing_closed(n: int, gamma_t: float) -> float:
    """``exp(-n gamma_t)``; valid for either parity of ``n``."""
    n = _check_n(n)
    if gamma_t < 0:
        raise ValueError(f"gamma_t must be nonnegative, got {gamma_t}")
    return math.exp(-n * gamma_t)


def t_sep_noisy_w(n: int, gamma: float, tol: float = T_SEP_TOL) -> float:
    """Time at which the noisy W-state entanglement first vanishes.

    Bisection on ``gamma t`` to within ``tol``; the returned time lies on the
    dead side of the root, so the entanglement there is exactly zero.
    """
    n = _check_n(n)
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")

    def alive(gt: float) -> bool:
        return _noisy_w_bracket(n, math.exp(-gt)) > 0

    if not alive(0.0):
        raise ArithmeticError(f"noisy W bracket is not positive at t=0 for n={n}")
    lo, hi = 0.0, 1.0
    while alive(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if alive(mid):
            lo = mid
        else:
            hi = mid
    return hi / gamma
