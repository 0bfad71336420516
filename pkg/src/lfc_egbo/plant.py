"""Closed-loop state-space model of the PID-controlled two-area AGC system.

State ordering is ``(x1, ..., x7, u1, u2)``:

* ``x1``, ``x4`` -- frequency deviation of area 1 / area 2
* ``x2``, ``x5`` -- turbine output change
* ``x3``, ``x6`` -- governor valve position change
* ``x7`` -- tie-line power deviation
* ``u1``, ``u2`` -- controller outputs

The controllers are PID blocks acting on the area control errors, written in
derivative form so that ``u1`` and ``u2`` become ordinary states:
``du/dt = Kp * dACE/dt + Ki * ACE + Kd * d2ACE/dt2``.  Two coefficient sets
for those rows are available: the closed-form expressions used by the
published benchmark (``"appendix_c"``) and a chain-rule expansion of the
open-loop dynamics (``"analytic"``).  They agree everywhere except the
``x1`` coefficient of ``du1/dt``, where the published expression drops the
derivative-gain terms; see :func:`coefficient_discrepancies`.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "COEFFICIENT_SOURCES",
    "DEFAULT_T12",
    "STATE_NAMES",
    "ClosedLoopMatrix",
    "CoefficientSet",
    "PidGains",
    "PlantParams",
    "StateVector",
    "ace",
    "analytic_coefficients",
    "appendix_c_coefficients",
    "closed_loop_matrix",
    "coefficient_discrepancies",
    "open_loop_derivative",
]

STATE_NAMES = ("x1", "x2", "x3", "x4", "x5", "x6", "x7", "u1", "u2")
N_STATES = 9

COEFFICIENT_SOURCES = ("appendix_c", "analytic")

# Synchronising coefficient such that 2*pi*t12 = 0.05; calibrated against the
# published gain/ITAE pairs (the system data tables give no value for it).
DEFAULT_T12 = 0.05 / (2.0 * math.pi)


@dataclass(frozen=True)
class PlantParams:
    """Physical constants of the two identical non-reheat thermal areas.

    Defaults are the nominal benchmark values.  ``t12`` enters the model as
    ``2*pi*t12``.  ``coefficient_source`` selects how the controller rows of
    the closed-loop matrix are built.
    """

    r1: float = 3.0
    r2: float = 3.0
    b1: float = 0.425
    b2: float = 0.425
    tsg1: float = 0.4
    tsg2: float = 0.4
    tt1: float = 0.5
    tt2: float = 0.5
    tps1: float = 20.0
    tps2: float = 20.0
    kps1: float = 100.0
    kps2: float = 100.0
    t12: float = DEFAULT_T12
    a12: float = 1.0
    coefficient_source: str = "appendix_c"

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if f.name == "coefficient_source":
                continue
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{f.name} must be a finite number, got {value!r}")
            if value <= 0:
                raise ValueError(f"{f.name} must be strictly positive, got {value!r}")
        if self.coefficient_source not in COEFFICIENT_SOURCES:
            raise ValueError(
                f"coefficient_source must be one of {COEFFICIENT_SOURCES}, "
                f"got {self.coefficient_source!r}"
            )

    @property
    def sync(self) -> float:
        """Synchronising term ``2*pi*t12`` (1/s)."""
        return 2.0 * math.pi * self.t12

    def replace(self, **changes) -> "PlantParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class PidGains:
    """The six-dimensional decision vector ``(Kp1, Ki1, Kd1, Kp2, Ki2, Kd2)``."""

    kp1: float
    ki1: float
    kd1: float
    kp2: float
    ki2: float
    kd2: float

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"gain {f.name} must be finite, got {value!r}")

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "PidGains":
        values = [float(v) for v in values]
        if len(values) != 6:
            raise ValueError(f"expected 6 gain values (kp1, ki1, kd1, kp2, ki2, kd2), got {len(values)}")
        return cls(*values)

    @classmethod
    def zeros(cls) -> "PidGains":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array(dataclasses.astuple(self), dtype=float)


class StateVector(NamedTuple):
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    x4: float = 0.0
    x5: float = 0.0
    x6: float = 0.0
    x7: float = 0.0
    u1: float = 0.0
    u2: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients of ``du1/dt`` (``e``) and ``du2/dt`` (``f``).

    ``e[0:7]`` multiply ``x1..x7``; ``e[7]`` and ``e[8]`` multiply the load
    steps ``w1`` and ``w2``.  Same layout for ``f``.
    """

    e: np.ndarray
    f: np.ndarray

    def as_dict(self) -> dict[str, float]:
        out = {f"e{k + 1}": float(v) for k, v in enumerate(self.e)}
        out.update({f"f{k + 1}": float(v) for k, v in enumerate(self.f)})
        return out


@dataclass(frozen=True)
class ClosedLoopMatrix:
    a: np.ndarray  # (9, 9)
    b_w: np.ndarray  # (9, 2), columns (w1, w2)


def _as_gains(gains) -> PidGains:
    if isinstance(gains, PidGains):
        return gains
    return PidGains.from_sequence(gains)


def _open_loop_rows(p: PlantParams) -> tuple[np.ndarray, np.ndarray]:
    """Rows 1-7 of the state matrix and their disturbance columns."""
    a = np.zeros((7, N_STATES))
    b = np.zeros((7, 2))
    a[0, 0] = -1.0 / p.tps1
    a[0, 1] = p.kps1 / p.tps1
    a[0, 6] = -p.kps1 / p.tps1
    b[0, 0] = -p.kps1 / p.tps1

    a[1, 1] = -1.0 / p.tt1
    a[1, 2] = 1.0 / p.tt1

    a[2, 0] = -1.0 / (p.r1 * p.tsg1)
    a[2, 2] = -1.0 / p.tsg1
    a[2, 7] = 1.0 / p.tsg1

    a[3, 3] = -1.0 / p.tps2
    a[3, 4] = p.kps2 / p.tps2
    # tie-line import raises area-2 frequency
    a[3, 6] = p.kps2 * p.a12 / p.tps2
    b[3, 1] = -p.kps2 / p.tps2

    a[4, 4] = -1.0 / p.tt2
    a[4, 5] = 1.0 / p.tt2

    a[5, 3] = -1.0 / (p.r2 * p.tsg2)
    a[5, 5] = -1.0 / p.tsg2
    a[5, 8] = 1.0 / p.tsg2

    a[6, 0] = p.sync
    a[6, 3] = -p.sync
    return a, b


def open_loop_derivative(params: PlantParams, state, w1: float = 0.0, w2: float = 0.0) -> np.ndarray:
    """Time derivatives of ``x1..x7`` for the given state and load steps.

    Written out term by term rather than through the matrix so it can serve
    as an independent check on :func:`closed_loop_matrix`.
    """
    p = params
    x1, x2, x3, x4, x5, x6, x7, u1, u2 = (float(v) for v in state)
    return np.array([
        p.kps1 / p.tps1 * (x2 - x7 - w1) - x1 / p.tps1,
        (x3 - x2) / p.tt1,
        (u1 - x1 / p.r1 - x3) / p.tsg1,
        p.kps2 / p.tps2 * (x5 + p.a12 * x7 - w2) - x4 / p.tps2,
        (x6 - x5) / p.tt2,
        (u2 - x4 / p.r2 - x6) / p.tsg2,
        p.sync * (x1 - x4),
    ])


def ace(params: PlantParams, state) -> tuple[float, float]:
    """Area control errors ``(b1*x1 + x7, b2*x4 - a12*x7)``."""
    s = np.asarray(state, dtype=float)
    return (params.b1 * s[0] + s[6], params.b2 * s[3] - params.a12 * s[6])


def appendix_c_coefficients(params: PlantParams, gains) -> CoefficientSet:
    """Controller-row coefficients from the published closed-form expressions.

    Evaluated exactly as printed, including the ``e1`` expression that has no
    derivative-gain contribution.
    """
    g = _as_gains(gains)
    p = params
    T = p.sync
    kp1, ki1, kd1, kp2, ki2, kd2 = g.kp1, g.ki1, g.kd1, g.kp2, g.ki2, g.kd2
    b1, b2, a12 = p.b1, p.b2, p.a12
    kps1, kps2, tps1, tps2, tt1, tt2 = p.kps1, p.kps2, p.tps1, p.tps2, p.tt1, p.tt2

    e = np.array([
        T * kp1 + ki1 * b1 - kp1 * b1 / tps1,
        kp1 * b1 * kps1 / tps1
        - kd1 * b1 * kps1 / (tps1 * tt1)
        - kd1 * b1 * kps1 / tps1**2
        + kd1 * kps1 * T / tps1,
        kd1 * b1 * kps1 / (tps1 * tt1),
        -kp1 * T + kd1 * b1 * kps1 * T / tps1 + kd1 * T / tps2,
        -kd1 * kps2 * T / tps2,
        0.0,
        ki1
        - kp1 * b1 * kps1 / tps1
        + kd1 * b1 * kps1 / tps1**2
        - kd1 * kps1 * T / tps1
        - kd1 * kps2 * T * a12 / tps2,
        -kp1 * b1 * kps1 / tps1 - kd1 * T * kps1 / tps1 + kd1 * b1 * kps1 / tps1**2,
        kd1 * T * kps2 / tps2,
    ])
    f = np.array([
        -kp2 * T * a12 + kd2 * b2 * kps2 * T * a12 / tps2 + kd2 * a12 * T / tps1,
        -kd2 * kps1 * T * a12 / tps1,
        0.0,
        -kp2 * b2 / tps2
        + kp2 * T * a12
        + ki2 * b2
        - kd2 * b2 * kps2 * T * a12 / tps2
        + kd2 * b2 / tps2**2
        - kd2 * T * a12 / tps2,
        kp2 * b2 * kps2 / tps2
        - kd2 * b2 * kps2 / (tps2 * tt2)
        - kd2 * b2 * kps2 / tps2**2
        + kd2 * kps2 * T * a12 / tps2,
        kd2 * b2 * kps2 / (tps2 * tt2),
        kp2 * b2 * kps2 * a12 / tps2
        - kd2 * b2 * kps2 * a12 / tps2**2
        + kd2 * kps1 * T * a12 / tps1
        - ki2 * a12
        + kd2 * kps2 * T * a12**2 / tps2,
        kd2 * T * kps1 * a12 / tps1,
        -kp2 * b2 * kps2 / tps2 - kd2 * T * kps2 * a12 / tps2 + kd2 * b2 * kps2 / tps2**2,
    ])
    return CoefficientSet(e=e, f=f)


def analytic_coefficients(params: PlantParams, gains) -> CoefficientSet:
    """Controller-row coefficients by chain-rule expansion of the plant.

    Each ACE is a linear form ``c . x``.  With constant load steps, its time
    derivative is ``c[:7] @ M`` where ``M`` holds the open-loop rows over
    ``(x1..x7, u1, u2, w1, w2)``.  Neither ACE nor its first derivative depends
    on ``x3``, ``x6``, ``u1``, or ``u2``, so two differentiations never need
    ``du/dt``.
    """
    g = _as_gains(gains)
    a, b = _open_loop_rows(params)
    m = np.hstack([a, b])  # (7, 11)

    def ddt(form: np.ndarray) -> np.ndarray:
        if np.any(form[7:9] != 0.0):
            raise AssertionError("controller output leaked into an ACE derivative")
        return form[:7] @ m

    rows = []
    for kp, ki, kd, area in ((g.kp1, g.ki1, g.kd1, 1), (g.kp2, g.ki2, g.kd2, 2)):
        c = np.zeros(11)
        if area == 1:
            c[0], c[6] = params.b1, 1.0
        else:
            c[3], c[6] = params.b2, -params.a12
        d1 = ddt(c)
        d2 = ddt(d1)
        row = kp * d1 + ki * c + kd * d2
        rows.append(np.concatenate([row[:7], row[9:]]))
    return CoefficientSet(e=rows[0], f=rows[1])


def coefficient_discrepancies(params: PlantParams, gains, rtol: float = 1e-9) -> list[dict]:
    """Entries where the published and chain-rule coefficient sets disagree.

    Returns one dict per differing coefficient with keys ``name``,
    ``appendix_c``, ``analytic``, and ``rel_diff``.
    """
    pub = appendix_c_coefficients(params, gains).as_dict()
    ref = analytic_coefficients(params, gains).as_dict()
    out = []
    for name, v_pub in pub.items():
        v_ref = ref[name]
        scale = max(abs(v_pub), abs(v_ref))
        diff = abs(v_pub - v_ref)
        if diff > rtol * scale and diff > 1e-300:
            out.append({
                "name": name,
                "appendix_c": v_pub,
                "analytic": v_ref,
                "rel_diff": diff / scale,
            })
    return out


def closed_loop_matrix(params: PlantParams, gains, source: str | None = None) -> ClosedLoopMatrix:
    """Assemble the 9x9 state matrix and the 9x2 load-step input matrix.

    ``source`` overrides ``params.coefficient_source`` when given.
    """
    source = params.coefficient_source if source is None else source
    if source == "appendix_c":
        coeffs = appendix_c_coefficients(params, gains)
    elif source == "analytic":
        coeffs = analytic_coefficients(params, gains)
    else:
        raise ValueError(f"unknown coefficient source {source!r}")
    a7, b7 = _open_loop_rows(params)
    a = np.zeros((N_STATES, N_STATES))
    b = np.zeros((N_STATES, 2))
    a[:7] = a7
    b[:7] = b7
    a[7, :7] = coeffs.e[:7]
    a[8, :7] = coeffs.f[:7]
    b[7] = coeffs.e[7:]
    b[8] = coeffs.f[7:]
    return ClosedLoopMatrix(a=a, b_w=b)
