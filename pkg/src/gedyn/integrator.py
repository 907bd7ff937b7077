"""Fixed-step RK4 integration of the local Lindblad master equation.

This is deliberately independent of the Kraus maps in :mod:`gedyn.channels`:
it only sees jump operators and rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channels import LindbladSpec, apply_superoperator
from .qmatrix import InvalidStateError, check_density, num_qubits_of

STABILITY_MARGIN = 0.01
EVOLVED_PSD_TOL = 1e-8


@dataclass(frozen=True)
class IntegrationConfig:
    """Uniform RK4 grid on ``[0, t_final]``.

    ``rate_bound`` is the summed jump rate over the whole register; the step
    must satisfy ``h * rate_bound <= 0.01``.
    """

    t_final: float
    steps: int
    rate_bound: float = 0.0

    def __post_init__(self):
        if self.t_final < 0:
            raise ValueError(f"t_final must be nonnegative, got {self.t_final}")
        if self.steps < 1:
            raise ValueError(f"steps must be positive, got {self.steps}")
        if self.h * self.rate_bound > STABILITY_MARGIN * (1 + 1e-12):
            raise ValueError(
                f"step {self.h:.3g} too large for total rate {self.rate_bound:.3g}: "
                f"h * rate = {self.h * self.rate_bound:.3g} > {STABILITY_MARGIN}"
            )

    @property
    def h(self) -> float:
        return self.t_final / self.steps

    @classmethod
    def for_spec(
        cls, spec: LindbladSpec, n: int, t_final: float, gamma: float, steps: int | None = None
    ) -> "IntegrationConfig":
        """Config for ``n`` qubits; by default ``ceil(1000 gamma t_final)`` steps,
        raised if needed to respect the stability margin."""
        rate = n * spec.total_rate
        if steps is None:
            steps = max(
                1,
                math.ceil(1000 * gamma * t_final - 1e-9),
                math.ceil(rate * t_final / STABILITY_MARGIN - 1e-9),
            )
        return cls(t_final, steps, rate)


def _dissipator(rho: np.ndarray, superop: np.ndarray, n: int) -> np.ndarray:
    out = apply_superoperator(rho, superop, 0)
    for q in range(1, n):
        out += apply_superoperator(rho, superop, q)
    return out


def lindbladian_apply(rho: np.ndarray, spec: LindbladSpec) -> np.ndarray:
    """``d rho / dt`` with ``spec`` acting independently on every qubit."""
    rho = np.asarray(rho, dtype=complex)
    return _dissipator(rho, spec.superoperator(), num_qubits_of(rho.shape[0]))


def _rk4_step(rho: np.ndarray, superop: np.ndarray, n: int, h: float) -> np.ndarray:
    k1 = _dissipator(rho, superop, n)
    k2 = _dissipator(rho + 0.5 * h * k1, superop, n)
    k3 = _dissipator(rho + 0.5 * h * k2, superop, n)
    k4 = _dissipator(rho + h * k3, superop, n)
    return rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _check_config(rho: np.ndarray, spec: LindbladSpec, config: IntegrationConfig) -> None:
    needed = num_qubits_of(rho.shape[0]) * spec.total_rate
    if needed > config.rate_bound * (1 + 1e-12):
        raise ValueError(
            f"config was built for total rate {config.rate_bound:.3g}, "
            f"but the register needs {needed:.3g}"
        )


def _finish(rho: np.ndarray) -> np.ndarray:
    rho = rho / np.trace(rho)
    try:
        check_density(rho, psd_tol=EVOLVED_PSD_TOL)
    except InvalidStateError as exc:
        raise InvalidStateError(f"evolved state is invalid (step too large?): {exc}") from exc
    return rho


def rk4(rho0: np.ndarray, spec: LindbladSpec, t_final: float, steps: int) -> np.ndarray:
    """Plain RK4 endpoint: no stability guard, renormalization or checks.

    Used for convergence-order measurements, which need steps larger than
    :class:`IntegrationConfig` allows.
    """
    rho = np.asarray(rho0, dtype=complex)
    superop, n = spec.superoperator(), num_qubits_of(rho.shape[0])
    h = t_final / steps
    for _ in range(steps):
        rho = _rk4_step(rho, superop, n, h)
    return rho


def evolve(rho0: np.ndarray, spec: LindbladSpec, config: IntegrationConfig) -> np.ndarray:
    """Integrate to ``config.t_final`` and renormalize the trace once at the end.

    Raises
    ------
    InvalidStateError
        If the result is not a valid density matrix (PSD floor -1e-8).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    _check_config(rho0, spec, config)
    return _finish(rk4(rho0, spec, config.t_final, config.steps))


def evolve_along(
    rho0: np.ndarray, spec: LindbladSpec, times: Iterable[float], h: float
) -> list[np.ndarray]:
    """States at each of the ascending ``times`` from one continuous trajectory.

    Each segment between consecutive times is split into the fewest equal
    steps no longer than ``h``; renormalization is applied to the returned
    copies only, never to the running state.
    """
    rho = np.asarray(rho0, dtype=complex)
    n = num_qubits_of(rho.shape[0])
    if h * n * spec.total_rate > STABILITY_MARGIN * (1 + 1e-12):
        raise ValueError(f"step {h:.3g} violates the stability margin for {n} qubits")
    superop = spec.superoperator()
    out = []
    now = 0.0
    for t in times:
        if t < now:
            raise ValueError("times must be ascending and nonnegative")
        steps = math.ceil((t - now) / h - 1e-9)
        if steps:
            step = (t - now) / steps
            for _ in range(steps):
                rho = _rk4_step(rho, superop, n, step)
        now = t
        out.append(_finish(rho))
    return out
