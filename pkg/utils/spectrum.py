"""
Exact spectra, fluctuation expansions of the qubit splitting, sweet spots and
the leakage overlap.

For the triple dot the logical states are the lowest and highest levels and
the leakage state is the middle level.
"""
from __future__ import annotations

import logging
import math
from typing import Literal, NamedTuple

import numpy as np

from models.params import CdParams, CqParams
from utils.hamiltonians import C, h_cd, h_cq_even_odd, h_cq_position
from utils.qmath import herm_eig

logger = logging.getLogger(__name__)

FD_STEP_FRACTION = 1e-4
DERIVATIVE_TOL = 1e-8
MAX_BISECTIONS = 200


class SplittingExpansion(NamedTuple):
    """E01 ~ constant + linear_coeff * d_lin + quadratic_coeff * d_quad**2"""
    constant: float
    linear_coeff: float
    quadratic_coeff: float
    which_linear_variable: Literal["eps_d", "eps_q"]


class SpectrumRow(NamedTuple):
    eps_q: float
    e_low: float
    e_mid: float
    e_high: float


def splitting_cd(eps_d: float, t: float) -> float:
    return math.hypot(eps_d, 2.0 * t)


def splitting_cq_exact(p: CqParams) -> float:
    values = herm_eig(h_cq_position(p)).eigenvalues
    return float(values[-1] - values[0])


def splitting_cd_exact(p: CdParams) -> float:
    values = herm_eig(h_cd(p)).eigenvalues
    return float(values[-1] - values[0])


def expansion_cd(eps_d_bar: float, t: float) -> SplittingExpansion:
    if t <= 0:
        raise ValueError(f"Expansion requires t > 0 (got t={t}); the splitting is not analytic at eps_d = t = 0")
    norm_sq = eps_d_bar**2 + 4.0 * t**2
    root = math.sqrt(norm_sq)
    return SplittingExpansion(
        constant=root,
        linear_coeff=eps_d_bar / root,
        quadratic_coeff=2.0 * t**2 / (norm_sq * root),
        which_linear_variable="eps_d",
    )


def expansion_cq(eps_q_bar: float, t_logical: float) -> SplittingExpansion:
    """
    Expansion at eps_d_bar = 0. The linear term is in d_eps_q; eps_d enters
    only at second order.
    """
    if t_logical <= 0:
        raise ValueError(f"Expansion requires t_logical > 0, got {t_logical}")
    t = t_logical
    norm_sq = eps_q_bar**2 + 4.0 * t**2
    root = math.sqrt(norm_sq)
    return SplittingExpansion(
        constant=root,
        linear_coeff=eps_q_bar / root,
        quadratic_coeff=(eps_q_bar**2 + 2.0 * t**2) / (t**2 * root),
        which_linear_variable="eps_q",
    )


def leakage_overlap(delta_eps_d: float, t_logical: float) -> float:
    """
    |<L~|C>|^2 where L~ is the middle eigenvector of the even-odd Hamiltonian
    at eps_q = 0 with a dipolar detuning delta_eps_d.
    """
    if delta_eps_d == 0 and t_logical == 0:
        raise ValueError("Leakage overlap is undefined when both delta_eps_d and t_logical vanish")
    h = h_cq_even_odd(CqParams.symmetric(eps_q=0.0, t_logical=t_logical, eps_d=delta_eps_d))
    vectors = herm_eig(h).eigenvectors
    return float(abs(vectors[C, 1]) ** 2)


def spectrum_sweep(t_a: float, t_b: float, eps_d: float, eps_q_values: list[float]) -> list[SpectrumRow]:
    rows: list[SpectrumRow] = []
    for eps_q in eps_q_values:
        values = herm_eig(h_cq_position(CqParams(eps_d=eps_d, eps_q=eps_q, t_a=t_a, t_b=t_b))).eigenvalues
        rows.append(SpectrumRow(float(eps_q), float(values[0]), float(values[1]), float(values[2])))
    return rows


def _fd_step(t: float) -> float:
    return FD_STEP_FRACTION * max(t, 1.0)


def splitting_derivatives(p: CqParams) -> tuple[float, float]:
    """Centered-difference (dE01/d eps_d, dE01/d eps_q)."""
    h = _fd_step(p.t_logical)
    d_eps_d = (splitting_cq_exact(p.with_offsets(h, 0.0)) - splitting_cq_exact(p.with_offsets(-h, 0.0))) / (2 * h)
    d_eps_q = (splitting_cq_exact(p.with_offsets(0.0, h)) - splitting_cq_exact(p.with_offsets(0.0, -h))) / (2 * h)
    return d_eps_d, d_eps_q


def _bisect_zero(derivative, lo: float, hi: float) -> float:
    f_lo, f_hi = derivative(lo), derivative(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise ValueError(f"Derivative does not change sign on [{lo}, {hi}]")
    mid = 0.5 * (lo + hi)
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        f_mid = derivative(mid)
        if abs(f_mid) < DERIVATIVE_TOL or hi - lo < 1e-15:
            break
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return mid


def find_sweet_spots(kind: Literal["CD", "CQ"], t: float) -> tuple[float, ...]:
    """
    Zeros of the numeric first derivative of the exact splitting.

    CD returns (eps_d*,); CQ returns (eps_d*, eps_q*). The search brackets
    +-t around the origin along each detuning axis with the other held at 0.
    """
    if t <= 0:
        raise ValueError(f"Sweet-spot search requires t > 0, got {t}")
    step = _fd_step(t)
    bracket = (-t, 1.3 * t)

    if kind == "CD":
        def d_cd(eps: float) -> float:
            return (splitting_cd_exact(CdParams(eps_d=eps + step, t=t))
                    - splitting_cd_exact(CdParams(eps_d=eps - step, t=t))) / (2 * step)

        eps_d_star = _bisect_zero(d_cd, *bracket)
        logger.debug(f"CD sweet spot at eps_d={eps_d_star:.3e} for t={t}")
        return (eps_d_star,)

    if kind != "CQ":
        raise ValueError(f"Unknown qubit kind '{kind}'")

    def d_eps_q(eps: float) -> float:
        return splitting_derivatives(CqParams.symmetric(eps_q=eps, t_logical=t))[1]

    eps_q_star = _bisect_zero(d_eps_q, *bracket)

    # E01 is even in eps_d, so its eps_d-derivative is odd and the zero sits at
    # the symmetric point; the bracket check still guards against a shifted minimum.
    def d_eps_d(eps: float) -> float:
        return splitting_derivatives(CqParams.symmetric(eps_q=eps_q_star, t_logical=t, eps_d=eps))[0]

    eps_d_star = _bisect_zero(d_eps_d, *bracket)
    logger.debug(f"CQ double sweet spot at (eps_d, eps_q)=({eps_d_star:.3e}, {eps_q_star:.3e}) for t={t}")
    return eps_d_star, eps_q_star
