"""
Choi-Jamiolkowski process representation and process fidelity.

A process is stored as the state (I (x) U) |Phi><Phi| (I (x) U)^dagger on
ancilla (x) system, averaged over the quasistatic noise grid. The ancilla has
the system's dimension. For the triple dot |Phi> only spans the logical states
C and E, so leakage shows up directly as lost fidelity. This averaged state is
used as the chi matrix: F = Tr[chi_ideal chi_actual].
"""
from __future__ import annotations

import logging
import math
from typing import Literal, NamedTuple

import numpy as np

from models.noise import QuasistaticNoiseModel
from models.schedule import PulseSchedule, QubitKind
from utils.dynamics import DIMENSION, NoiseOffsets, ZERO_NOISE, bare_xpi, composite_xpi, propagator
from utils.noise import quadrature_grid
from utils.qmath import ComplexMatrix, conjugate_by, herm_eig, kron, projector, rotation

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-10
PSD_TOL = 1e-8
PURITY_TOL = 1e-8
CLAMP_TOL = 1e-9

# Tunnel coupling of every gate in the infidelity sweep (t for CD, t_a = t_b for CQ), GHz.
SWEEP_COUPLING_GHZ = 10.0

GateName = Literal["cd_bare", "cq_bare", "cq_composite"]
GATE_NAMES: tuple[GateName, ...] = ("cd_bare", "cq_bare", "cq_composite")


class ProcessMatrix(NamedTuple):
    dim: int
    matrix: ComplexMatrix


class CurvePoint(NamedTuple):
    sigma_eps_ghz: float
    infidelity: float


def validate_process(process: ProcessMatrix) -> ProcessMatrix:
    m = process.matrix
    size = process.dim**2
    if m.shape != (size, size):
        raise ValueError(f"Process of dimension {process.dim} must be {size}x{size}, got {m.shape}")
    trace_err = abs(np.trace(m) - 1.0)
    if trace_err > TRACE_TOL:
        raise ValueError(f"Process trace deviates from 1 by {trace_err:.3e}")
    herm_err = float(np.max(np.abs(m - m.conj().T)))
    if herm_err > TRACE_TOL:
        raise ValueError(f"Process matrix is not Hermitian: {herm_err:.3e}")
    min_eig = float(herm_eig(m).eigenvalues[0])
    if min_eig < -PSD_TOL:
        raise ValueError(f"Process matrix is not positive semidefinite: smallest eigenvalue {min_eig:.3e}")
    return process


def _phi(kind: QubitKind) -> np.ndarray:
    dim = DIMENSION[kind]
    phi = np.zeros(dim * dim, dtype=np.complex128)
    # |00> + |11> on ancilla (x) system; for CQ these are |CC> and |EE>.
    for index in (0, 1):
        phi[index * dim + index] = 1.0 / math.sqrt(2.0)
    return phi


def choi_initial(kind: QubitKind) -> ProcessMatrix:
    return ProcessMatrix(DIMENSION[kind], projector(_phi(kind)))


def _apply_system_unitary(rho_e: ComplexMatrix, u: ComplexMatrix) -> ComplexMatrix:
    dim = u.shape[0]
    return conjugate_by(kron(np.eye(dim), u), rho_e)


def choi_of_unitary(u: ComplexMatrix, kind: QubitKind) -> ProcessMatrix:
    """
    Pure Choi state of a unitary. A 2x2 unitary given for a CQ process is taken
    as the logical action and padded with identity on L.
    """
    dim = DIMENSION[kind]
    u = np.asarray(u, dtype=np.complex128)
    if kind == "CQ" and u.shape == (2, 2):
        padded = np.eye(3, dtype=np.complex128)
        padded[:2, :2] = u
        u = padded
    if u.shape != (dim, dim):
        raise ValueError(f"{kind} unitary must be {dim}x{dim}, got {u.shape}")
    return ProcessMatrix(dim, _apply_system_unitary(choi_initial(kind).matrix, u))


def process_at(schedule: PulseSchedule, noise_offsets: NoiseOffsets = ZERO_NOISE) -> ProcessMatrix:
    """Pure Choi state for a single noise realization."""
    return choi_of_unitary(propagator(schedule, noise_offsets), schedule.kind)


def process_of_schedule(schedule: PulseSchedule, noise_model: QuasistaticNoiseModel) -> ProcessMatrix:
    """Weight-averaged Choi state over the quadrature grid, in ascending d_eps_d order."""
    dim = DIMENSION[schedule.kind]
    rho0 = choi_initial(schedule.kind).matrix
    averaged = np.zeros_like(rho0)
    grid = quadrature_grid(noise_model)
    for point in grid:
        u = propagator(schedule, (point.d_eps_d, point.d_eps_q))
        averaged += point.weight * _apply_system_unitary(rho0, u)
    logger.debug(f"Averaged {schedule.kind} process over {len(grid)} quadrature points")
    return validate_process(ProcessMatrix(dim, averaged))


def purity(process: ProcessMatrix) -> float:
    m = process.matrix
    return float(np.real(np.trace(m @ m)))


def process_leakage(process: ProcessMatrix) -> float:
    """Population the process moves out of {C, E}; zero for a double dot."""
    if process.dim == 2:
        return 0.0
    dim = process.dim
    diagonal = np.real(np.diag(process.matrix))
    return float(sum(diagonal[a * dim + 2] for a in range(dim)))


def process_fidelity(ideal: ProcessMatrix, actual: ProcessMatrix) -> float:
    """F = Re Tr[ideal . actual]; the ideal process must be pure."""
    if ideal.dim != actual.dim or ideal.matrix.shape != actual.matrix.shape:
        raise ValueError(f"Process dimensions differ: {ideal.dim} vs {actual.dim}")
    ideal_purity = purity(ideal)
    if abs(ideal_purity - 1.0) > PURITY_TOL:
        raise ValueError(f"Ideal process must be pure, got purity {ideal_purity:.12f}")
    fidelity = float(np.real(np.trace(ideal.matrix @ actual.matrix)))
    if fidelity < -CLAMP_TOL or fidelity > 1.0 + CLAMP_TOL:
        raise ValueError(f"Fidelity {fidelity!r} is outside [0, 1] beyond round-off")
    return min(1.0, max(0.0, fidelity))


def ideal_xpi(kind: QubitKind) -> ProcessMatrix:
    return choi_of_unitary(rotation("x", math.pi), kind)


def gate_schedule(gate: GateName, coupling_ghz: float = SWEEP_COUPLING_GHZ) -> PulseSchedule:
    """
    The three Xpi gates of the infidelity sweep at a common tunnel coupling:
    t = coupling for the double dot, t_a = t_b = coupling for the triple dot
    (logical coupling sqrt(2) * coupling).
    """
    if gate == "cd_bare":
        return bare_xpi(coupling_ghz, "CD")
    t_logical = math.sqrt(2.0) * coupling_ghz
    if gate == "cq_bare":
        return bare_xpi(t_logical, "CQ")
    if gate == "cq_composite":
        return composite_xpi(2.0 * math.pi * t_logical)
    raise ValueError(f"Unknown gate '{gate}'; expected one of {', '.join(GATE_NAMES)}")


def gate_infidelity(schedule: PulseSchedule, noise_model: QuasistaticNoiseModel) -> float:
    return 1.0 - process_fidelity(ideal_xpi(schedule.kind), process_of_schedule(schedule, noise_model))


def infidelity_curve(
    gate: GateName,
    sigma_list: list[float],
    noise_model_template: QuasistaticNoiseModel,
    coupling_ghz: float = SWEEP_COUPLING_GHZ,
) -> list[CurvePoint]:
    schedule = gate_schedule(gate, coupling_ghz)
    return [
        CurvePoint(float(sigma), gate_infidelity(schedule, noise_model_template.with_sigma(sigma)))
        for sigma in sigma_list
    ]


def improvement_factors(bare: list[CurvePoint], composite: list[CurvePoint]) -> list[float]:
    """Bare/composite infidelity ratio per sigma (inf where the composite is exact)."""
    factors: list[float] = []
    for b, c in zip(bare, composite):
        if b.sigma_eps_ghz != c.sigma_eps_ghz:
            raise ValueError("Curves must share their sigma grid")
        factors.append(b.infidelity / c.infidelity if c.infidelity > 0 else math.inf)
    return factors
