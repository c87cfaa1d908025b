"""
Gate calibration against a target logical unitary and noise-sensitivity
coefficients of pulse schedules.
"""
from __future__ import annotations

import logging
import math
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.optimize import minimize

from models.params import CdParams, CqParams
from models.schedule import PulseSchedule, QubitKind
from utils.dynamics import ZERO_NOISE, composite_xpi, gate_x, gate_z
from utils.errors import NonConvergenceError
from utils.qmath import HERMITIAN_TOL
from utils.tomography import ProcessMatrix, choi_of_unitary, process_at, process_fidelity

logger = logging.getLogger(__name__)

STEP_FRACTION = 1e-3
RICHARDSON_TOL = 0.05
# Below this infidelity at the difference steps the coefficient is numerically zero.
SENSITIVITY_FLOOR = 1e-7
SIMPLEX_RTOL = 1e-6
MAX_ITERATIONS = 500
TIE_TOL = 1e-14

GateFamily = Callable[[Sequence[float]], PulseSchedule]


class CalibrationProblem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    target: np.ndarray
    bounds: tuple[tuple[float, float], ...]
    initial: tuple[float, ...] | None = None
    tolerance: float = Field(default=1e-10, gt=0.0)
    kind: QubitKind = "CQ"

    @field_validator("target", mode="before")
    @classmethod
    def _unitary_target(cls, value: object) -> np.ndarray:
        u = np.asarray(value, dtype=np.complex128)
        if u.shape != (2, 2):
            raise ValueError(f"Target must be a 2x2 logical unitary, got shape {u.shape}")
        err = float(np.max(np.abs(u.conj().T @ u - np.eye(2))))
        if err > HERMITIAN_TOL:
            raise ValueError(f"Target is not unitary: max |U^dagger U - I| = {err:.3e}")
        return u

    @model_validator(mode="after")
    def _bounds_and_guess(self) -> CalibrationProblem:
        if not self.bounds:
            raise ValueError("At least one parameter bound is required")
        for index, (lo, hi) in enumerate(self.bounds):
            if not lo <= hi:
                raise ValueError(f"Empty search interval for parameter {index}: [{lo}, {hi}]")
        if self.initial is not None:
            if len(self.initial) != len(self.bounds):
                raise ValueError(f"Initial guess has {len(self.initial)} parameters, bounds have {len(self.bounds)}")
            for index, (value, (lo, hi)) in enumerate(zip(self.initial, self.bounds)):
                if not lo <= value <= hi:
                    raise ValueError(f"Initial value {value} of parameter {index} lies outside [{lo}, {hi}]")
        return self

    @property
    def start(self) -> np.ndarray:
        if self.initial is not None:
            return np.asarray(self.initial, dtype=float)
        return np.asarray([(lo + hi) / 2.0 for lo, hi in self.bounds], dtype=float)


class CalibrationResult(NamedTuple):
    parameters: tuple[float, ...]
    objective: float
    iterations: int
    converged: bool
    duration_ns: float


# Gate families: each returns a builder from a parameter vector to a schedule.

def x_duration(t_x: float, kind: QubitKind = "CQ") -> GateFamily:
    """Free parameter: duration of one X segment at fixed coupling t_x."""
    template = gate_x(math.pi, t_x, kind)

    def build(x: Sequence[float]) -> PulseSchedule:
        segment = template.model_copy(update={"duration_ns": float(x[0])})
        return PulseSchedule(kind=kind, segments=(segment,))

    return build


def z_duration(eps_z: float, kind: QubitKind = "CQ") -> GateFamily:
    """Free parameter: duration of one Z segment at fixed detuning eps_z."""
    template = gate_z(math.pi, eps_z, kind)

    def build(x: Sequence[float]) -> PulseSchedule:
        segment = template.model_copy(update={"duration_ns": float(x[0])})
        return PulseSchedule(kind=kind, segments=(segment,))

    return build


def x_coupling_duration(kind: QubitKind = "CQ") -> GateFamily:
    """Free parameters: (t_x, duration)."""

    def build(x: Sequence[float]) -> PulseSchedule:
        segment = gate_x(math.pi, float(x[0]), kind).model_copy(update={"duration_ns": float(x[1])})
        return PulseSchedule(kind=kind, segments=(segment,))

    return build


def composite_eps_z() -> GateFamily:
    """Free parameter: eps_z of the composite X_pi (coupling tied to eps_z / 2 pi)."""

    def build(x: Sequence[float]) -> PulseSchedule:
        return composite_xpi(float(x[0]))

    return build


FAMILIES: dict[str, Callable[..., GateFamily]] = {
    "x_duration": x_duration,
    "z_duration": z_duration,
    "x_coupling_duration": x_coupling_duration,
    "composite_eps_z": composite_eps_z,
}


def gate_objective(problem: CalibrationProblem, schedule: PulseSchedule) -> float:
    """1 - F between the target and the zero-noise process of the schedule."""
    target = choi_of_unitary(problem.target, schedule.kind)
    return 1.0 - process_fidelity(target, process_at(schedule, ZERO_NOISE))


def calibrate_gate(problem: CalibrationProblem, gate_family: GateFamily) -> CalibrationResult:
    """
    Bounded Nelder-Mead search minimizing the gate objective. The initial guess
    is returned unchanged when it already meets the tolerance; otherwise the best
    evaluated point is returned, the shortest schedule among equal objectives.
    """
    x0 = problem.start
    f0 = gate_objective(problem, gate_family(x0))
    if f0 < problem.tolerance:
        return CalibrationResult(tuple(float(v) for v in x0), f0, 0, True, gate_family(x0).total_duration_ns)

    lower = np.array([lo for lo, _ in problem.bounds])
    upper = np.array([hi for _, hi in problem.bounds])
    evaluated: list[tuple[float, float, tuple[float, ...]]] = [
        (f0, gate_family(x0).total_duration_ns, tuple(float(v) for v in x0))
    ]

    def objective(x: np.ndarray) -> float:
        x = np.clip(x, lower, upper)
        schedule = gate_family(x)
        value = gate_objective(problem, schedule)
        evaluated.append((value, schedule.total_duration_ns, tuple(float(v) for v in x)))
        return value

    scale = max(float(np.max(np.abs(x0))), 1e-12)
    result = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        bounds=list(problem.bounds),
        options={
            "xatol": SIMPLEX_RTOL * scale,
            "fatol": problem.tolerance * 1e-3,
            "maxiter": MAX_ITERATIONS,
        },
    )
    best = min(value for value, _, _ in evaluated)
    ties = [entry for entry in evaluated if entry[0] <= min(best + TIE_TOL, f0)]
    value, duration, params = min(ties, key=lambda entry: (entry[1], entry[0]))
    converged = value < problem.tolerance
    logger.debug(
        f"Calibration finished after {result.nit} iterations "
        f"({len(evaluated)} evaluations): objective {value:.3e}, converged={converged}"
    )
    return CalibrationResult(params, value, int(result.nit), converged, duration)


def _infidelity_at(schedule: PulseSchedule, reference: ProcessMatrix, delta: float) -> float:
    return 1.0 - process_fidelity(reference, process_at(schedule, (delta, 0.0)))


def _difference_coefficient(f: Callable[[float], float], h: float, order: Literal[2, 4]) -> tuple[float, float]:
    """(coefficient, largest |f| sampled) from centered differences at step h."""
    if order == 2:
        values = [f(-h), f(0.0), f(h)]
        coefficient = (values[0] - 2.0 * values[1] + values[2]) / (2.0 * h**2)
    else:
        values = [f(-2 * h), f(-h), f(0.0), f(h), f(2 * h)]
        fourth = values[0] - 4.0 * values[1] + 6.0 * values[2] - 4.0 * values[3] + values[4]
        coefficient = fourth / (24.0 * h**4)
    return coefficient, max(abs(v) for v in values)


def _difference_step(schedule: PulseSchedule) -> float:
    """1e-3 of the largest tunnel coupling; uncoupled schedules fall back to their detuning and rate scale."""
    coupling = schedule.max_coupling
    if coupling > 0:
        return STEP_FRACTION * coupling
    detunings = [abs(value) for segment in schedule.segments for value in _detunings(segment.params)]
    duration = schedule.total_duration_ns
    scale = max([*detunings, 1.0 / duration if duration > 0 else 0.0])
    return STEP_FRACTION * scale if scale > 0 else STEP_FRACTION


def _detunings(params: CqParams | CdParams) -> tuple[float, ...]:
    if isinstance(params, CqParams):
        return params.eps_d, params.eps_q
    return (params.eps_d,)


def sensitivity_coefficient(schedule: PulseSchedule, order: Literal[2, 4] = 2) -> float:
    """
    c_k in 1 - F(d_eps_d) ~ c_k d_eps_d^k, with d_eps_q = 0 and the schedule's
    own zero-noise process as reference. Richardson-extrapolated from steps
    h and h/2 (see _difference_step).
    """
    if order not in (2, 4):
        raise ValueError(f"Sensitivity order must be 2 or 4, got {order}")
    reference = process_at(schedule, ZERO_NOISE)

    def f(delta: float) -> float:
        return _infidelity_at(schedule, reference, delta)

    h = _difference_step(schedule)
    c_h, peak_h = _difference_coefficient(f, h, order)
    c_half, peak_half = _difference_coefficient(f, h / 2.0, order)
    extrapolated = (4.0 * c_half - c_h) / 3.0

    if max(peak_h, peak_half) < SENSITIVITY_FLOOR:
        return extrapolated
    if abs(c_h - c_half) > RICHARDSON_TOL * abs(c_half):
        raise NonConvergenceError(
            f"Order-{order} sensitivity did not converge: c(h)={c_h:.6e}, c(h/2)={c_half:.6e} at h={h:.3e}"
        )
    return extrapolated
