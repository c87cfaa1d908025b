"""
Two capacitively coupled CQ qubits and the pulsed CNOT protocol.

The model is restricted to the logical space {C, E} (x) {C, E}, ordered
|CC>, |CE>, |EC>, |EE>. The logical |0~> is |C> (sigma_z = +1).
"""
from __future__ import annotations

import logging

import numpy as np

from models.params import LogicalQubit, TwoQubitParams
from models.schedule import TwoQubitSchedule, TwoQubitSegment
from utils.qmath import IDENTITY_2, SIGMA_X, SIGMA_Z, ComplexMatrix, expm_unitary, kron

logger = logging.getLogger(__name__)

# j must be at least this multiple of t2 for the conditional error budget.
COUPLING_RATIO_MIN = 10.0
FAR_DETUNING_RATIO = 10.0
DEFAULT_IDLE_NS = 1.0

# Output index of each computational input under CNOT controlled on |0~>.
CNOT_MAP = (1, 0, 2, 3)


def _logical_hamiltonian(q: LogicalQubit) -> ComplexMatrix:
    return 0.5 * q.eps_q * (IDENTITY_2 + SIGMA_Z) + q.t_logical * SIGMA_X


def h_two_qubit(p: TwoQubitParams) -> ComplexMatrix:
    """H = h1 (x) I + I (x) h2 + J sigma_z (x) sigma_z."""
    return (
        kron(_logical_hamiltonian(p.q1), IDENTITY_2)
        + kron(IDENTITY_2, _logical_hamiltonian(p.q2))
        + p.j * kron(SIGMA_Z, SIGMA_Z)
    )


def cnot_schedule(t2: float, j: float, far_detuning: float, idle_ns: float = DEFAULT_IDLE_NS) -> TwoQubitSchedule:
    """
    Idle with both qubits far detuned and couplings off, then a conditional X_pi
    on qubit 2: eps_q2 = -2J brings the control-|0~> branch to zero effective
    detuning while the control-|1~> branch sits at -4J. Qubit 1 is untouched.
    No coupling budget is enforced here; see cnot_protocol.
    """
    if t2 <= 0:
        raise ValueError(f"Target coupling t2 must be positive, got {t2}")
    idle = TwoQubitParams(
        q1=LogicalQubit(eps_q=far_detuning),
        q2=LogicalQubit(eps_q=far_detuning),
        j=j,
    )
    pulse = TwoQubitParams(
        q1=LogicalQubit(eps_q=far_detuning),
        q2=LogicalQubit(eps_q=-2.0 * j, t_logical=t2),
        j=j,
    )
    return TwoQubitSchedule(
        segments=(
            TwoQubitSegment(params=idle, duration_ns=idle_ns),
            TwoQubitSegment(params=pulse, duration_ns=1.0 / (4.0 * t2)),
        )
    )


def cnot_protocol(t2: float, j: float, far_detuning: float, idle_ns: float = DEFAULT_IDLE_NS) -> TwoQubitSchedule:
    if j < COUPLING_RATIO_MIN * t2:
        raise ValueError(
            f"j={j} GHz is below {COUPLING_RATIO_MIN:g} * t2 = {COUPLING_RATIO_MIN * t2} GHz; "
            f"the control-|1> branch would flip with probability up to {conditional_flip_bound(t2, j):.3e}"
        )
    limit = -FAR_DETUNING_RATIO * max(j, t2)
    if far_detuning >= limit:
        raise ValueError(f"far_detuning={far_detuning} GHz must lie below {limit} GHz")
    return cnot_schedule(t2, j, far_detuning, idle_ns)


def two_qubit_propagator(schedule: TwoQubitSchedule) -> ComplexMatrix:
    u = np.eye(4, dtype=np.complex128)
    for segment in schedule.segments:
        u = expm_unitary(h_two_qubit(segment.params), segment.duration_ns) @ u
    return u


def population_transfer(schedule: TwoQubitSchedule) -> np.ndarray:
    """
    P[out, in] for the four computational inputs. With couplings off during the
    idle the idle eigenstates are the computational basis states themselves.
    """
    u = two_qubit_propagator(schedule)
    return np.abs(u) ** 2


def truth_table_fidelity(schedule: TwoQubitSchedule) -> float:
    """Mean population on the CNOT-mapped output; phases are ignored."""
    p = population_transfer(schedule)
    fidelity = float(np.mean([p[out, inp] for inp, out in enumerate(CNOT_MAP)]))
    logger.debug(f"Truth-table fidelity {fidelity:.12f}")
    return fidelity


def conditional_flip_bound(t2: float, j: float) -> float:
    """Largest flip probability of the control-|1~> branch, t2^2 / (t2^2 + (2J)^2)."""
    return t2**2 / (t2**2 + (2.0 * j) ** 2)
