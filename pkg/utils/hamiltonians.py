"""
Charge-dipole and charge-quadrupole Hamiltonians.

Position basis for the triple dot is {|100>, |010>, |001>}. The even-odd basis
used everywhere downstream is ordered {C, E, L}:

    |C> = |010>
    |E> = (|100> + |001>) / sqrt(2)
    |L> = (|100> - |001>) / sqrt(2)

|C> is the +1 eigenvector of the logical sigma_z. The additive offset
(U1 + U3)/2 is fixed to zero, so site potentials are referenced to the
outer-dot average.
"""
from __future__ import annotations

import math

import numpy as np

from models.params import CdParams, CqParams, SitePotentials
from utils.qmath import ComplexMatrix, commutator, frobenius, require_hermitian

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Rows are the bras <C|, <E|, <L| written in the position basis.
EVEN_ODD_BASIS: ComplexMatrix = np.array(
    [
        [0.0, 1.0, 0.0],
        [_INV_SQRT2, 0.0, _INV_SQRT2],
        [_INV_SQRT2, 0.0, -_INV_SQRT2],
    ],
    dtype=np.complex128,
)

# Swaps dots 1 and 3.
P13: ComplexMatrix = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=np.complex128)

C, E, L = 0, 1, 2


def detunings(u: SitePotentials) -> tuple[float, float]:
    """(eps_d, eps_q) = ((U1 - U3)/2, U2 - (U1 + U3)/2)"""
    eps_d = (u.u1 - u.u3) / 2.0
    eps_q = u.u2 - (u.u1 + u.u3) / 2.0
    return eps_d, eps_q


def site_potentials_from_detunings(eps_d: float, eps_q: float) -> SitePotentials:
    """Inverse of detunings under the zero outer-average convention."""
    return SitePotentials(u1=eps_d, u2=eps_q, u3=-eps_d)


def h_cq_position(p: CqParams) -> ComplexMatrix:
    return np.array(
        [
            [p.eps_d, p.t_a, 0.0],
            [p.t_a, p.eps_q, p.t_b],
            [0.0, p.t_b, -p.eps_d],
        ],
        dtype=np.complex128,
    )


def h_cd(p: CdParams) -> ComplexMatrix:
    return np.array(
        [
            [p.eps_d / 2.0, p.t],
            [p.t, -p.eps_d / 2.0],
        ],
        dtype=np.complex128,
    )


def to_even_odd(h_pos: ComplexMatrix) -> ComplexMatrix:
    """Rotate a position-basis triple-dot Hamiltonian into {C, E, L}."""
    h = require_hermitian(h_pos)
    if h.shape != (3, 3):
        raise ValueError(f"Triple-dot Hamiltonian must be 3x3, got {h.shape}")
    return EVEN_ODD_BASIS @ h @ EVEN_ODD_BASIS.conj().T


def h_cq_even_odd(p: CqParams) -> ComplexMatrix:
    """
    Closed form of to_even_odd(h_cq_position(p)):

        [[eps_q,               (t_a+t_b)/sqrt2, (t_a-t_b)/sqrt2],
         [(t_a+t_b)/sqrt2,     0,               eps_d          ],
         [(t_a-t_b)/sqrt2,     eps_d,           0              ]]
    """
    t_plus = (p.t_a + p.t_b) * _INV_SQRT2
    t_minus = (p.t_a - p.t_b) * _INV_SQRT2
    return np.array(
        [
            [p.eps_q, t_plus, t_minus],
            [t_plus, 0.0, p.eps_d],
            [t_minus, p.eps_d, 0.0],
        ],
        dtype=np.complex128,
    )


def logical_block(p: CqParams) -> ComplexMatrix:
    """{C, E} block: (eps_q/2)(1 + sigma_z) + t_logical sigma_x at symmetric tuning."""
    return h_cq_even_odd(p)[:2, :2].copy()


def symmetry_residual(p: CqParams) -> float:
    """||[H, P13]||_F; zero iff t_a = t_b and eps_d = 0."""
    return frobenius(commutator(h_cq_position(p), P13))
