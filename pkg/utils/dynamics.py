"""
Density-matrix evolution under piecewise-constant pulse schedules.

Quasistatic noise offsets (d_eps_d, d_eps_q) are constant across every segment
of one schedule realization. CQ states live in {C, E, L}; CD states in the
position basis {|L>, |R>} of the double dot.
"""
from __future__ import annotations

import logging
import math
from typing import Literal

import numpy as np

from models.params import CdParams, CqParams
from models.schedule import DriveSegment, PulseSchedule, PulseSegment, QubitKind
from utils.hamiltonians import C, E, L, h_cd, h_cq_even_odd
from utils.qmath import ComplexMatrix, conjugate_by, expm_unitary, herm_eig, projector

logger = logging.getLogger(__name__)

NoiseOffsets = tuple[float, float]
ZERO_NOISE: NoiseOffsets = (0.0, 0.0)

TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
# max_step must resolve the drive: at least this many samples per period.
MIN_SAMPLES_PER_PERIOD = 20

DIMENSION: dict[str, int] = {"CD": 2, "CQ": 3}


def hamiltonian(params: CqParams | CdParams, noise_offsets: NoiseOffsets = ZERO_NOISE) -> ComplexMatrix:
    """Segment Hamiltonian with noise offsets applied (CQ in {C, E, L})."""
    d_eps_d, d_eps_q = noise_offsets
    if isinstance(params, CqParams):
        return h_cq_even_odd(params.with_offsets(d_eps_d, d_eps_q))
    return h_cd(params.with_offsets(d_eps_d))


def _validate_density(rho: ComplexMatrix, kind: QubitKind) -> ComplexMatrix:
    rho = np.asarray(rho, dtype=np.complex128)
    dim = DIMENSION[kind]
    if rho.shape != (dim, dim):
        raise ValueError(f"{kind} density matrix must be {dim}x{dim}, got {rho.shape}")
    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > TRACE_TOL:
        raise ValueError(f"Density matrix trace deviates from 1 by {trace_err:.3e}")
    herm_err = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_err > TRACE_TOL:
        raise ValueError(f"Density matrix is not Hermitian: max |rho - rho^dagger| = {herm_err:.3e}")
    min_eig = float(herm_eig(rho).eigenvalues[0])
    if min_eig < -POSITIVITY_TOL:
        raise ValueError(f"Density matrix is not positive semidefinite: smallest eigenvalue {min_eig:.3e}")
    return rho


def segment_propagator(
    segment: PulseSegment | DriveSegment, noise_offsets: NoiseOffsets = ZERO_NOISE
) -> ComplexMatrix:
    if isinstance(segment, DriveSegment):
        return driven_propagator(segment, noise_offsets)
    return expm_unitary(hamiltonian(segment.params, noise_offsets), segment.duration_ns)


def propagator(schedule: PulseSchedule, noise_offsets: NoiseOffsets = ZERO_NOISE) -> ComplexMatrix:
    """Total propagator; the first segment acts first (rightmost factor)."""
    u = np.eye(DIMENSION[schedule.kind], dtype=np.complex128)
    for segment in schedule.segments:
        u = segment_propagator(segment, noise_offsets) @ u
    return u


def logical_propagator(schedule: PulseSchedule, noise_offsets: NoiseOffsets = ZERO_NOISE) -> ComplexMatrix:
    """2x2 logical block of the propagator ({C, E} for CQ)."""
    return propagator(schedule, noise_offsets)[:2, :2].copy()


def evolve(rho0: ComplexMatrix, schedule: PulseSchedule, noise_offsets: NoiseOffsets = ZERO_NOISE) -> ComplexMatrix:
    rho = _validate_density(rho0, schedule.kind)
    for segment in schedule.segments:
        rho = conjugate_by(segment_propagator(segment, noise_offsets), rho)
    return rho


def gate_x(alpha: float, t_x: float, kind: QubitKind) -> PulseSegment:
    """X_alpha: detuning at zero, coupling t_x, duration alpha / (4 pi t_x)."""
    if t_x <= 0:
        raise ValueError(f"X rotations need a positive tunnel coupling, got t_x={t_x}")
    if alpha <= 0:
        raise ValueError(f"Rotation angle must be positive, got alpha={alpha}")
    duration = alpha / (4.0 * math.pi * t_x)
    params: CqParams | CdParams
    if kind == "CQ":
        params = CqParams.symmetric(eps_q=0.0, t_logical=t_x)
    else:
        params = CdParams(eps_d=0.0, t=t_x)
    return PulseSegment(params=params, duration_ns=duration)


def gate_z(beta: float, eps_z: float, kind: QubitKind) -> PulseSegment:
    """
    Z_beta: couplings off, detuning +-eps_z, duration |beta| / (2 pi |eps_z|).

    A negative beta flips the sign of the applied detuning and keeps the
    duration, so the sense of rotation is sign(beta) * sign(eps_z).
    """
    if eps_z == 0:
        raise ValueError("Z rotations need a non-zero detuning eps_z")
    if beta == 0:
        raise ValueError("Rotation angle beta must be non-zero")
    duration = abs(beta) / (2.0 * math.pi * abs(eps_z))
    applied = eps_z if beta > 0 else -eps_z
    params: CqParams | CdParams
    if kind == "CQ":
        params = CqParams(eps_d=0.0, eps_q=applied, t_a=0.0, t_b=0.0)
    else:
        params = CdParams(eps_d=applied, t=0.0)
    return PulseSegment(params=params, duration_ns=duration)


def bare_xpi(t_x: float, kind: QubitKind) -> PulseSchedule:
    return PulseSchedule(kind=kind, segments=(gate_x(math.pi, t_x, kind),))


def composite_xpi(eps_z: float) -> PulseSchedule:
    """
    Z_{2pi} X_{3pi} Z_{-2pi} read right to left: Z_{-2pi} acts first.
    The X_{3pi} coupling is t_x = eps_z / (2 pi).
    """
    if eps_z <= 0:
        raise ValueError(f"Composite X_pi needs eps_z > 0, got {eps_z}")
    t_x = eps_z / (2.0 * math.pi)
    segments = (
        gate_z(-2.0 * math.pi, eps_z, "CQ"),
        gate_x(3.0 * math.pi, t_x, "CQ"),
        gate_z(2.0 * math.pi, eps_z, "CQ"),
    )
    return PulseSchedule(kind="CQ", segments=segments)


def _driven_params(seg: DriveSegment, eps_value: float) -> CqParams | CdParams:
    p = seg.params
    if isinstance(p, CqParams):
        return p.model_copy(update={"eps_q": eps_value})
    return p.model_copy(update={"eps_d": eps_value})


def _drive_steps(seg: DriveSegment) -> tuple[int, float]:
    if seg.nu > 0 and seg.max_step_ns > 1.0 / (MIN_SAMPLES_PER_PERIOD * seg.nu):
        raise ValueError(
            f"max_step_ns={seg.max_step_ns} is too coarse for nu={seg.nu} GHz; "
            f"need <= {1.0 / (MIN_SAMPLES_PER_PERIOD * seg.nu):.4g} ns"
        )
    n_steps = max(1, math.ceil(seg.duration_ns / seg.max_step_ns - 1e-12))
    return n_steps, seg.duration_ns / n_steps


def _driven_step_unitaries(seg: DriveSegment, noise_offsets: NoiseOffsets):
    """Yield (end time, step propagator) using midpoint sampling of the drive."""
    n_steps, dt = _drive_steps(seg)
    p = seg.params
    eps_bar = p.eps_q if isinstance(p, CqParams) else p.eps_d
    for k in range(n_steps):
        t_mid = (k + 0.5) * dt
        eps_value = eps_bar + seg.eps_ac * math.cos(2.0 * math.pi * seg.nu * t_mid + seg.phase)
        h = hamiltonian(_driven_params(seg, eps_value), noise_offsets)
        yield (k + 1) * dt, expm_unitary(h, dt)


def driven_propagator(seg: DriveSegment, noise_offsets: NoiseOffsets = ZERO_NOISE) -> ComplexMatrix:
    """Product of the step propagators; the step size is checked even for a zero amplitude."""
    _drive_steps(seg)
    if seg.eps_ac == 0:
        return expm_unitary(hamiltonian(seg.params, noise_offsets), seg.duration_ns)
    u = np.eye(DIMENSION[seg.kind], dtype=np.complex128)
    for _, step in _driven_step_unitaries(seg, noise_offsets):
        u = step @ u
    return u


def evolve_driven(rho0: ComplexMatrix, seg: DriveSegment, noise_offsets: NoiseOffsets = ZERO_NOISE) -> ComplexMatrix:
    rho = _validate_density(rho0, seg.kind)
    return conjugate_by(driven_propagator(seg, noise_offsets), rho)


def driven_trajectory(
    rho0: ComplexMatrix,
    seg: DriveSegment,
    noise_offsets: NoiseOffsets = ZERO_NOISE,
    sample_every: int = 1,
) -> list[tuple[float, ComplexMatrix]]:
    """States after every sample_every-th drive step, with the initial state at time 0."""
    if sample_every < 1:
        raise ValueError(f"sample_every must be >= 1, got {sample_every}")
    rho = _validate_density(rho0, seg.kind)
    trajectory = [(0.0, rho)]
    u = np.eye(DIMENSION[seg.kind], dtype=np.complex128)
    n_steps, _ = _drive_steps(seg)
    for index, (time, step) in enumerate(_driven_step_unitaries(seg, noise_offsets), start=1):
        u = step @ u
        if index % sample_every == 0 or index == n_steps:
            trajectory.append((time, conjugate_by(u, rho)))
    logger.debug(f"Driven trajectory: {n_steps} steps, {len(trajectory)} samples")
    return trajectory


def eigenstate_density(params: CqParams | CdParams, level: int | Literal["ground", "excited"]) -> ComplexMatrix:
    """
    Density matrix of an eigenstate. For CQ the logical levels are the lowest
    ("ground") and highest ("excited"); the middle level is leakage.
    """
    vectors = herm_eig(hamiltonian(params)).eigenvectors
    if level == "ground":
        index = 0
    elif level == "excited":
        index = vectors.shape[1] - 1
    else:
        index = int(level)
    return projector(vectors[:, index])


def basis_density(kind: QubitKind, index: int) -> ComplexMatrix:
    dim = DIMENSION[kind]
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[index, index] = 1.0
    return rho


def leakage_population(rho: ComplexMatrix) -> float:
    rho = np.asarray(rho)
    if rho.shape != (3, 3):
        raise ValueError(f"Leakage is only defined for 3x3 CQ states, got {rho.shape}")
    return float(rho[L, L].real)


def logical_populations(rho: ComplexMatrix) -> tuple[float, float]:
    rho = np.asarray(rho)
    return float(rho[C, C].real), float(rho[E, E].real)
