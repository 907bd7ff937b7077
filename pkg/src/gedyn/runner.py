"""Parameter sweeps, decay-rate fits, sudden-death detection and CSV output."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import closed_form
from .channels import ChannelKind, apply_uniform_channel, kraus_for, lindblad_generator
from .integrator import STABILITY_MARGIN, evolve_along
from .measures import ge_ghz_tangle_route, ge_w_tangle_route
from .qmatrix import MAX_QUBITS, partial_trace
from .states import density_from_pure, ghz_state, w_state

STATES = ("ghz", "w")
METHODS = ("closed", "kraus", "ode")
MAX_CLOSED_N = 64
DEFAULT_GAMMA_T_MAX = 3.0
DEFAULT_GRID_POINTS = 101
RATE_FLOOR = 1e-6
T_SEP_THRESHOLD = 1e-12
GE_SLACK = 1e-10
ODE_STEP = 1e-3
CROSS_CHECK_TOL = {("kraus", "ode"): 1e-7, ("closed", "kraus"): 1e-9}

CURVE_HEADER = ("state", "channel", "n", "gamma_t", "e_gl", "method")
RATES_HEADER = ("state", "channel", "n", "method", "alpha", "residual", "points_used")
TSEP_HEADER = ("state", "channel", "n", "method", "t_sep")


class ConfigError(ValueError):
    """Invalid sweep configuration or unusable input data."""


class NumericInvariantError(ArithmeticError):
    """A computed quantity left its allowed range."""


@dataclass(frozen=True)
class CurvePoint:
    state: str
    channel: ChannelKind
    n: int
    gamma_t: float
    e_gl: float
    method: str

    def sort_key(self):
        return (self.state, self.channel.value, self.n, self.method, self.gamma_t)


@dataclass(frozen=True)
class RateFit:
    n: int
    alpha: float
    residual: float
    points_used: int
    state: str = ""
    channel: ChannelKind | None = None
    method: str = ""

    def sort_key(self):
        return (self.state, self.channel.value if self.channel else "", self.n, self.method)


def valid_methods(state: str, channel: ChannelKind) -> tuple[str, ...]:
    """Methods available for a (state, channel) pair."""
    if state == "w" or channel is ChannelKind.DEPHASING:
        return METHODS
    return ("kraus", "ode")


@dataclass(frozen=True)
class SweepConfig:
    state: str
    channel: ChannelKind
    n_list: tuple[int, ...]
    methods: tuple[str, ...] = ("closed",)
    gamma_t_max: float = DEFAULT_GAMMA_T_MAX
    grid_points: int = DEFAULT_GRID_POINTS
    out: Path | None = None

    def __post_init__(self):
        object.__setattr__(self, "channel", ChannelKind.parse(self.channel))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "methods", tuple(self.methods))
        self.validate()

    def validate(self) -> None:
        if self.state not in STATES:
            raise ConfigError(f"unknown state {self.state!r}; expected one of {', '.join(STATES)}")
        if not self.methods:
            raise ConfigError("at least one method is required")
        allowed = valid_methods(self.state, self.channel)
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
            if m not in allowed:
                raise ConfigError(
                    f"method {m!r} is not available for {self.state}/{self.channel.value}; "
                    f"valid methods: {', '.join(allowed)}"
                )
        if not self.n_list:
            raise ConfigError("n_list is empty")
        if not (self.gamma_t_max > 0 and math.isfinite(self.gamma_t_max)):
            raise ConfigError(f"gamma_t_max must be positive, got {self.gamma_t_max}")
        if self.grid_points < 2:
            raise ConfigError(f"grid_points must be at least 2, got {self.grid_points}")
        matrix = any(m != "closed" for m in self.methods)
        limit = MAX_QUBITS if matrix else MAX_CLOSED_N
        for n in self.n_list:
            if not 2 <= n <= limit:
                raise ConfigError(f"n={n} outside [2, {limit}] for methods {', '.join(self.methods)}")
            if self.state == "ghz" and matrix and n % 2:
                raise ConfigError(f"GHZ tangle route needs even n, got {n}")

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.gamma_t_max, self.grid_points)


def closed_curve(state: str, channel: ChannelKind, n: int) -> Callable[[float], float]:
    """Closed-form ``E(gamma_t)`` for a (state, channel, n) triple."""
    channel = ChannelKind.parse(channel)
    if state == "w":
        return lambda gt: closed_form.w_ge_closed(channel, n, gt)
    if channel is ChannelKind.DEPHASING:
        return lambda gt: closed_form.ghz_ge_dephasing_closed(n, gt)
    raise ConfigError(f"no closed form for {state}/{channel.value}; valid methods: kraus, ode")


def _initial_density(state: str, n: int) -> np.ndarray:
    return density_from_pure(ghz_state(n) if state == "ghz" else w_state(n))


def _tangle_ge(state: str, rho: np.ndarray, n: int) -> float:
    if state == "w":
        return ge_w_tangle_route(partial_trace(rho, [0, 1]), n)
    return ge_ghz_tangle_route(rho)


def _curve(config: SweepConfig, n: int, method: str, grid: np.ndarray) -> list[float]:
    state, kind = config.state, config.channel
    if method == "closed":
        f = closed_curve(state, kind, n)
        return [f(gt) for gt in grid]
    rho0 = _initial_density(state, n)
    if method == "kraus":
        return [
            _tangle_ge(state, apply_uniform_channel(rho0, kraus_for(kind, math.exp(-gt))), n)
            for gt in grid
        ]
    spec = lindblad_generator(kind, 1.0)
    h = min(ODE_STEP, STABILITY_MARGIN / (n * spec.total_rate))
    return [_tangle_ge(state, rho, n) for rho in evolve_along(rho0, spec, grid, h)]


def run_sweep(config: SweepConfig) -> list[CurvePoint]:
    """One point per (n, grid gamma_t, method), in deterministic CSV order.

    Rates are measured in units of gamma, so the ODE runs with gamma = 1 and
    time equal to gamma_t.
    """
    grid = config.grid()
    points = []
    for n in config.n_list:
        for method in config.methods:
            for gt, e in zip(grid, _curve(config, n, method, grid)):
                if not -GE_SLACK <= e <= 1 + GE_SLACK:
                    raise NumericInvariantError(
                        f"E_gl={e!r} out of range at {config.state}/{config.channel.value} "
                        f"n={n} gamma_t={gt} ({method})"
                    )
                points.append(CurvePoint(config.state, config.channel, n, float(gt), float(e), method))
    return sorted(points, key=CurvePoint.sort_key)


def method_discrepancies(points: Iterable[CurvePoint]) -> dict[tuple[str, str], float]:
    """Largest pointwise |delta E| between each pair of methods on shared points."""
    table: dict[tuple, dict[str, float]] = {}
    for pt in points:
        table.setdefault((pt.state, pt.channel, pt.n, pt.gamma_t), {})[pt.method] = pt.e_gl
    out: dict[tuple[str, str], float] = {}
    for values in table.values():
        for a, b in combinations(sorted(values), 2):
            out[(a, b)] = max(out.get((a, b), 0.0), abs(values[a] - values[b]))
    return out


def group_curves(points: Iterable[CurvePoint]) -> dict[tuple, list[CurvePoint]]:
    """Split points into curves keyed by (state, channel, n, method), sorted by gamma_t."""
    groups: dict[tuple, list[CurvePoint]] = {}
    for pt in points:
        groups.setdefault((pt.state, pt.channel, pt.n, pt.method), []).append(pt)
    return {
        k: sorted(v, key=lambda p: p.gamma_t)
        for k, v in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value, *kv[0][2:]))
    }


def _single_curve(points: Sequence[CurvePoint]) -> tuple:
    keys = {(p.state, p.channel, p.n, p.method) for p in points}
    if len(keys) != 1:
        raise ConfigError(f"expected points from one curve, got {len(keys)} curves")
    return keys.pop()


def fit_decay_rate(points: Sequence[CurvePoint]) -> RateFit:
    """Least-squares fit of ``ln E = c - alpha gamma_t`` over points above the floor."""
    state, channel, n, method = _single_curve(points)
    usable = [p for p in points if p.e_gl > RATE_FLOOR]
    if len(usable) < 3:
        raise ConfigError(
            f"{state}/{channel.value} n={n} ({method}): only {len(usable)} points above "
            f"{RATE_FLOOR:g}, need 3"
        )
    x = np.array([p.gamma_t for p in usable])
    y = np.log([p.e_gl for p in usable])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return RateFit(n, float(-slope), residual, len(usable), state, channel, method)


def detect_t_sep(points: Sequence[CurvePoint], tol: float = 1e-9) -> float | None:
    """First ``gamma_t`` where the curve drops to ``1e-12`` or below.

    Closed-form curves vanish exactly past the root, so they are refined by
    bisection on ``E > 0`` between the last live grid point and the first
    dead one. Near the root ``E`` is quadratic, and bisecting on the 1e-12
    threshold instead would land about 1e-6 early. Other methods return the
    grid value.
    """
    if not points:
        return None
    state, channel, n, method = _single_curve(points)
    pts = sorted(points, key=lambda p: p.gamma_t)
    for i, pt in enumerate(pts):
        if pt.e_gl <= T_SEP_THRESHOLD:
            break
    else:
        return None
    if method != "closed" or i == 0:
        return pt.gamma_t
    dead = next((p.gamma_t for p in pts[i:] if p.e_gl == 0.0), None)
    if dead is None:
        return pt.gamma_t
    f = closed_curve(state, channel, n)
    lo, hi = pts[i - 1].gamma_t, dead
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _fmt(x) -> str:
    if isinstance(x, ChannelKind):
        return x.value
    if isinstance(x, float):
        return repr(x)
    if x is None:
        return ""
    return str(x)


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit_csv(items: Sequence[CurvePoint] | Sequence[RateFit], path: Path | str) -> None:
    """Write curve points or rate fits to ``path`` in deterministic order.

    An empty sequence writes the curve header only.
    """
    items = list(items)
    if items and isinstance(items[0], RateFit):
        emit_rates_csv(items, path)
        return
    rows = [
        (p.state, p.channel, p.n, p.gamma_t, p.e_gl, p.method)
        for p in sorted(items, key=CurvePoint.sort_key)
    ]
    _write_rows(Path(path), CURVE_HEADER, rows)


def emit_rates_csv(fits: Iterable[RateFit], path: Path | str) -> None:
    rows = [
        (f.state, f.channel, f.n, f.method, f.alpha, f.residual, f.points_used)
        for f in sorted(fits, key=RateFit.sort_key)
    ]
    _write_rows(Path(path), RATES_HEADER, rows)


def emit_t_sep_csv(results: Iterable[tuple[tuple, float | None]], path: Path | str) -> None:
    _write_rows(Path(path), TSEP_HEADER, [(*key, t) for key, t in results])


def read_curve_csv(path: Path | str) -> list[CurvePoint]:
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CURVE_HEADER:
                raise ConfigError(f"{path}: expected header {','.join(CURVE_HEADER)}")
            return [
                CurvePoint(
                    row["state"],
                    ChannelKind.parse(row["channel"]),
                    int(row["n"]),
                    float(row["gamma_t"]),
                    float(row["e_gl"]),
                    row["method"],
                )
                for row in reader
            ]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{path}: malformed curve row: {exc}") from exc


def cross_check_violations(discrepancies: dict[tuple[str, str], float]) -> list[str]:
    """Method pairs whose disagreement exceeds the cross-check tolerance."""
    out = []
    for pair, tol in CROSS_CHECK_TOL.items():
        d = discrepancies.get(pair)
        if d is not None and d > tol:
            out.append(f"{pair[0]} vs {pair[1]}: {d:.3e} > {tol:g}")
    return out
