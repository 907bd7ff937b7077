"""Single-qubit decoherence channels and their Lindblad generators.

Every channel is parameterized by the decoherence parameter ``p = exp(-gamma t)``:
``p = 1`` is the identity and ``p = 0`` the fully decohered limit.

* dissipative: amplitude damping towards ``|0>`` (jump ``sigma_minus``)
* dephasing: phase damping (jump ``|1><1|``)
* noisy: depolarizing, every Bloch component shrinks by ``p``
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .qmatrix import (
    I2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    num_qubits_of,
)

COMPLETENESS_TOL = 1e-12


class ChannelKind(str, enum.Enum):
    DISSIPATIVE = "dissipative"
    DEPHASING = "dephasing"
    NOISY = "noisy"

    @classmethod
    def parse(cls, value: "ChannelKind | str") -> "ChannelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown channel {value!r}; expected one of {valid}") from None


def check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"decoherence parameter p must lie in [0, 1], got {p}")
    return p


def p_from_gamma_t(gamma: float, t: float) -> float:
    """``exp(-gamma t)`` for nonnegative rate and time."""
    if gamma < 0 or t < 0:
        raise ValueError(f"gamma and t must be nonnegative, got gamma={gamma}, t={t}")
    return math.exp(-gamma * t)


@dataclass(frozen=True)
class SingleQubitKraus:
    kind: ChannelKind
    p: float
    operators: tuple[np.ndarray, ...]

    def completeness_error(self) -> float:
        total = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(total - I2)))

    def superoperator(self) -> np.ndarray:
        return kraus_superoperator(self.operators)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        """Apply to a single-qubit density matrix."""
        return sum(k @ rho @ k.conj().T for k in self.operators)


@dataclass(frozen=True)
class LindbladSpec:
    """Jump operators with rates, applied identically to every qubit."""

    jumps: tuple[tuple[np.ndarray, float], ...]

    def __post_init__(self):
        for op, rate in self.jumps:
            if np.shape(op) != (2, 2):
                raise ValueError(f"jump operators must be 2x2, got shape {np.shape(op)}")
            if rate < 0:
                raise ValueError(f"jump rates must be nonnegative, got {rate}")

    @property
    def total_rate(self) -> float:
        return float(sum(rate for _, rate in self.jumps))

    def superoperator(self) -> np.ndarray:
        """Single-qubit dissipator as a 4-index superoperator."""
        s = np.zeros((2, 2, 2, 2), dtype=complex)
        for j, rate in self.jumps:
            jd = j.conj().T
            g = jd @ j
            s += rate * np.einsum("ab,dc->adbc", j, j.conj())
            s -= 0.5 * rate * np.einsum("ab,dc->adbc", g, I2)
            s -= 0.5 * rate * np.einsum("ab,cd->adbc", I2, g)
        return s


def kraus_for(kind: ChannelKind | str, p: float) -> SingleQubitKraus:
    """Canonical Kraus set for ``kind`` at decoherence parameter ``p``."""
    kind = ChannelKind.parse(kind)
    p = check_p(p)
    if kind is ChannelKind.DISSIPATIVE:
        ops = (
            np.diag([1.0, math.sqrt(p)]).astype(complex),
            math.sqrt(1 - p) * SIGMA_MINUS,
        )
    elif kind is ChannelKind.DEPHASING:
        ops = (
            np.diag([1.0, math.sqrt(p)]).astype(complex),
            np.diag([0.0, math.sqrt(1 - p)]).astype(complex),
        )
    else:
        w = math.sqrt((1 - p) / 4)
        ops = (math.sqrt((1 + 3 * p) / 4) * I2, w * SIGMA_X, w * SIGMA_Y, w * SIGMA_Z)
    return SingleQubitKraus(kind, p, tuple(ops))


def kraus_superoperator(operators) -> np.ndarray:
    """``S[a, d, b, c]`` such that ``rho'[a, d] = sum S[a, d, b, c] rho[b, c]``."""
    return sum(np.einsum("ab,dc->adbc", k, k.conj()) for k in operators)


def apply_superoperator(rho: np.ndarray, superop: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a single-qubit linear map (4-index form) to ``qubit`` of ``rho``."""
    n = num_qubits_of(rho.shape[0])
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n} qubits")
    left, right = 2**qubit, 2 ** (n - qubit - 1)
    t = rho.reshape(left, 2, right, left, 2, right)
    out = np.tensordot(superop, t, axes=([2, 3], [1, 4]))  # a, d, i, j, k, l
    return out.transpose(2, 0, 3, 4, 1, 5).reshape(rho.shape)


def apply_local_channel(rho: np.ndarray, kraus: SingleQubitKraus, qubit: int) -> np.ndarray:
    """Apply ``kraus`` to a single qubit of the register."""
    return apply_superoperator(np.asarray(rho, dtype=complex), kraus.superoperator(), qubit)


def apply_uniform_channel(rho: np.ndarray, kraus: SingleQubitKraus) -> np.ndarray:
    """Apply the same local channel independently to every qubit."""
    rho = np.asarray(rho, dtype=complex)
    superop = kraus.superoperator()
    for q in range(num_qubits_of(rho.shape[0])):
        rho = apply_superoperator(rho, superop, q)
    return rho


def lindblad_generator(kind: ChannelKind | str, gamma: float) -> LindbladSpec:
    """Per-qubit jump operators whose flow at time ``t`` equals ``kraus_for(kind, exp(-gamma t))``."""
    kind = ChannelKind.parse(kind)
    if gamma < 0:
        raise ValueError(f"rate must be nonnegative, got {gamma}")
    if kind is ChannelKind.DISSIPATIVE:
        return LindbladSpec(((SIGMA_MINUS, gamma),))
    if kind is ChannelKind.DEPHASING:
        return LindbladSpec(((SIGMA_PLUS @ SIGMA_MINUS, gamma),))
    return LindbladSpec(((SIGMA_X, gamma / 4), (SIGMA_Y, gamma / 4), (SIGMA_Z, gamma / 4)))


def noisy_generator_literal(gamma: float) -> LindbladSpec:
    """Thermal-noise generator with jumps ``sigma_minus`` and ``sigma_plus`` at rate ``gamma``.

    Populations relax at ``2 gamma`` while coherences decay at ``gamma``, so
    this is not the depolarizing flow used everywhere else. Kept for
    comparison runs only.
    """
    if gamma < 0:
        raise ValueError(f"rate must be nonnegative, got {gamma}")
    return LindbladSpec(((SIGMA_MINUS, gamma), (SIGMA_PLUS, gamma)))
