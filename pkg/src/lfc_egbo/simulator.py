"""Step-load simulation of the closed loop and the ITAE objective."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .plant import STATE_NAMES, ClosedLoopMatrix, PidGains, PlantParams, closed_loop_matrix

__all__ = [
    "DIVERGENCE_LIMIT",
    "DIVERGENCE_PENALTY",
    "TRAJECTORY_COLUMNS",
    "DivergenceError",
    "LoadCase",
    "SearchSpace",
    "SignalMetrics",
    "SimConfig",
    "Trajectory",
    "case_catalog",
    "evaluate",
    "get_case",
    "integrate",
    "itae",
    "settling_metrics",
    "write_trajectory_csv",
]

DIVERGENCE_LIMIT = 1e6
DIVERGENCE_PENALTY = 1e6

TRAJECTORY_COLUMNS = ("t",) + STATE_NAMES + ("ace1", "ace2")


class DivergenceError(RuntimeError):
    """A state left ``[-DIVERGENCE_LIMIT, DIVERGENCE_LIMIT]`` (unstable loop)."""

    def __init__(self, time: float):
        super().__init__(f"closed loop diverged at t = {time:.4g} s")
        self.time = time


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01
    t_final: float = 40.0
    record_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= self.dt:
            raise ValueError(f"t_final must be >= dt, got {self.t_final}")
        ratio = self.t_final / self.dt
        if abs(ratio - round(ratio)) > 1e-6 * ratio:
            raise ValueError(f"t_final/dt must be an integer, got {ratio}")
        if not isinstance(self.record_stride, int) or self.record_stride < 1:
            raise ValueError(f"record_stride must be a positive integer, got {self.record_stride!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))


@dataclass(frozen=True)
class LoadCase:
    """Constant step loads (pu) applied to both areas at ``t = 0``."""

    id: int
    w1: float
    w2: float

    def __post_init__(self):
        for name in ("w1", "w2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def label(self) -> str:
        return f"case-{self.id}"

    @property
    def w(self) -> np.ndarray:
        return np.array([self.w1, self.w2])


_CATALOG = (
    LoadCase(1, 0.15, 0.15),
    LoadCase(2, 0.25, 0.0),
    LoadCase(3, 0.0, 0.25),
    LoadCase(4, 0.20, 0.10),
    LoadCase(5, 0.10, 0.20),
)


def case_catalog() -> list[LoadCase]:
    """The five benchmark load scenarios."""
    return list(_CATALOG)


def get_case(key) -> LoadCase:
    """Look up a catalog case by id (``3``) or label (``"case-3"``)."""
    if isinstance(key, LoadCase):
        return key
    if isinstance(key, str):
        key = key.strip().lower().removeprefix("case-").removeprefix("case")
    try:
        ident = int(key)
    except (TypeError, ValueError):
        raise ValueError(f"unknown load case {key!r}") from None
    for case in _CATALOG:
        if case.id == ident:
            return case
    raise ValueError(f"unknown load case {key!r}")


@dataclass(frozen=True)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower and upper must be 1-D and of equal length")
        if not np.all(lo < hi):
            raise ValueError("lower must be strictly below upper in every component")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def default(cls) -> "SearchSpace":
        """Gain box ordered ``(kp1, ki1, kd1, kp2, ki2, kd2)``."""
        return cls(
            lower=np.array([-16.0, -45.0, -8.0, -16.0, -45.0, -8.0]),
            upper=np.array([-6.0, -15.0, -3.0, -6.0, -15.0, -3.0]),
        )

    @property
    def dimension(self) -> int:
        return self.lower.size

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=float)
        return bool(np.all(v >= self.lower) and np.all(v <= self.upper))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_samples, 9)
    case: LoadCase
    params: PlantParams | None = field(default=None, repr=False)

    def signal(self, name: str) -> np.ndarray:
        return self.states[:, STATE_NAMES.index(name)]

    def ace(self) -> tuple[np.ndarray, np.ndarray]:
        p = self.params or PlantParams()
        x1, x4, x7 = self.signal("x1"), self.signal("x4"), self.signal("x7")
        return p.b1 * x1 + x7, p.b2 * x4 - p.a12 * x7


def _forcing(matrix: ClosedLoopMatrix, case: LoadCase) -> np.ndarray:
    return np.ascontiguousarray(matrix.b_w @ case.w)


def integrate(matrix: ClosedLoopMatrix, case: LoadCase, cfg: SimConfig = SimConfig(),
              params: PlantParams | None = None) -> Trajectory:
    """Fixed-step RK4 from the zero state under the case's step loads.

    Raises :class:`DivergenceError` if the loop is unstable enough for a state
    to exceed ``DIVERGENCE_LIMIT`` within the horizon.
    """
    a = np.ascontiguousarray(matrix.a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("state matrix has non-finite entries")
    samples, diverged = _kernels.rk4_trajectory(
        a, _forcing(matrix, case), cfg.dt, cfg.n_steps, cfg.record_stride, DIVERGENCE_LIMIT
    )
    if diverged >= 0:
        raise DivergenceError(diverged * cfg.dt)
    times = np.arange(samples.shape[0]) * (cfg.dt * cfg.record_stride)
    return Trajectory(times=times, states=samples, case=case, params=params)


def itae(traj: Trajectory) -> float:
    """Trapezoidal integral of ``t * (|x1| + |x4| + |x7|)`` over the samples."""
    if traj.times.size == 0:
        raise ValueError("empty trajectory")
    s = traj.states
    integrand = traj.times * (np.abs(s[:, 0]) + np.abs(s[:, 3]) + np.abs(s[:, 6]))
    return float(np.trapezoid(integrand, traj.times))


def evaluate(params: PlantParams, gains, case: LoadCase, cfg: SimConfig = SimConfig()) -> float:
    """ITAE fitness of a gain vector; unstable loops get a penalty >= 1e6.

    The penalty grows the earlier the divergence happens, which keeps the
    landscape graded inside unstable regions.
    """
    if not isinstance(gains, PidGains):
        gains = PidGains.from_sequence(gains)
    m = closed_loop_matrix(params, gains)
    value, diverged = _kernels.rk4_itae(
        np.ascontiguousarray(m.a), _forcing(m, case), cfg.dt, cfg.n_steps, DIVERGENCE_LIMIT
    )
    if diverged >= 0:
        t_div = diverged * cfg.dt
        return DIVERGENCE_PENALTY * (2.0 - t_div / cfg.t_final)
    return float(value)


@dataclass(frozen=True)
class SignalMetrics:
    peak: float
    overshoot: float
    settling_time: float
    settled: bool = True
    defined: bool = True


def _settling_time(t: np.ndarray, mag: np.ndarray, threshold: float) -> tuple[float, bool]:
    outside = np.nonzero(mag > threshold)[0]
    if outside.size == 0:
        return float(t[0]), True
    last = outside[-1]
    if last == mag.size - 1:
        return float(t[-1]), False
    # linear interpolation of the final band crossing
    m0, m1 = mag[last], mag[last + 1]
    frac = (m0 - threshold) / (m0 - m1) if m0 != m1 else 0.0
    return float(t[last] + frac * (t[last + 1] - t[last])), True


def settling_metrics(traj: Trajectory, band_fraction: float = 0.02,
                     signals: Sequence[str] = ("x1", "x4", "x7")) -> dict[str, SignalMetrics]:
    """Peak, overshoot and settling time per signal.

    Settling time is the last time the signal is outside
    ``+-band_fraction * peak``.  Overshoot is the largest excursion on the
    opposite side of zero from the peak (all signals return to zero under
    integral action).  Identically-zero signals report zeros with
    ``defined=False``.
    """
    if not 0.0 < band_fraction < 1.0:
        raise ValueError(f"band_fraction must lie in (0, 1), got {band_fraction}")
    out = {}
    for name in signals:
        s = traj.signal(name)
        mag = np.abs(s)
        peak = float(mag.max()) if mag.size else 0.0
        if peak == 0.0:
            out[name] = SignalMetrics(0.0, 0.0, 0.0, settled=True, defined=False)
            continue
        sign = math.copysign(1.0, s[int(np.argmax(mag))])
        overshoot = float(max(0.0, np.max(-sign * s)))
        ts, settled = _settling_time(traj.times, mag, band_fraction * peak)
        out[name] = SignalMetrics(peak, overshoot, ts, settled=settled)
    return out


def write_trajectory_csv(traj: Trajectory, path) -> Path:
    """Write ``t,x1..x7,u1,u2,ace1,ace2`` at full float precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ace1, ace2 = traj.ace()
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_COLUMNS)
        for k, t in enumerate(traj.times):
            row = [repr(float(t))] + [repr(float(v)) for v in traj.states[k]]
            row += [repr(float(ace1[k])), repr(float(ace2[k]))]
            writer.writerow(row)
    return path
