"""
Quasistatic Gaussian noise quadrature, 1/f spectral densities and the
rotating-frame relaxation rate 1/T1rho during resonant driving.

Energies inside spectral-density arguments are converted to angular
frequencies omega = 2 pi f (f in GHz), giving rad/ns.
"""
from __future__ import annotations

import logging
import math
from typing import Literal, NamedTuple

import numpy as np

from models.noise import QuasistaticNoiseModel, SpectralDensity

logger = logging.getLogger(__name__)


class QuadraturePoint(NamedTuple):
    d_eps_d: float
    d_eps_q: float
    weight: float


class T1rhoPair(NamedTuple):
    rate_cd: float
    rate_cq: float

    @property
    def ratio(self) -> float:
        return self.rate_cq / self.rate_cd if self.rate_cd else math.nan


def _gaussian_axis(sigma: float, grid_n: int, range_sigmas: float) -> tuple[np.ndarray, np.ndarray]:
    """Equally spaced, exactly antisymmetric nodes and normalized Gaussian weights."""
    half = grid_n // 2
    if half == 0:
        return np.zeros(1), np.ones(1)
    step = range_sigmas * sigma / half
    nodes = np.arange(-half, half + 1, dtype=np.float64) * step
    weights = np.exp(-(nodes**2) / (2.0 * sigma**2))
    return nodes, weights / weights.sum()


def quadrature_grid(m: QuasistaticNoiseModel) -> list[QuadraturePoint]:
    """
    Grid over d_eps_d in ascending order. Averaging over the list in order gives
    bit-reproducible results.
    """
    if m.grid_n < 1:
        raise ValueError(f"grid_n must be >= 1, got {m.grid_n}")
    if m.sigma_eps_ghz == 0.0:
        return [QuadraturePoint(0.0, 0.0, 1.0)]

    nodes_d, weights_d = _gaussian_axis(m.sigma_eps_ghz, m.grid_n, m.range_sigmas)
    if m.correlated or m.kappa == 0.0:
        return [QuadraturePoint(float(x), float(m.kappa * x), float(w)) for x, w in zip(nodes_d, weights_d)]

    nodes_q, weights_q = _gaussian_axis(m.kappa * m.sigma_eps_ghz, m.grid_n, m.range_sigmas)
    points = [
        QuadraturePoint(float(xd), float(xq), float(wd * wq))
        for xd, wd in zip(nodes_d, weights_d)
        for xq, wq in zip(nodes_q, weights_q)
    ]
    logger.debug(f"Independent quadrature grid with {len(points)} points")
    return points


def angular(frequency_ghz: float) -> float:
    return 2.0 * math.pi * frequency_ghz


def one_over_f(amplitude: float, omega_min: float | None = None) -> SpectralDensity:
    if omega_min is None:
        return SpectralDensity(amplitude=amplitude)
    return SpectralDensity(amplitude=amplitude, omega_min=omega_min)


def t1rho_rate(
    eps_ac: float,
    t_logical: float,
    s_z: SpectralDensity,
    s_x: SpectralDensity,
    at_sweet_spot: bool = False,
) -> float:
    """
    1/T1rho = 2 S_z(eps_ac) + S_x(eps_ac + 2t) + S_x(eps_ac - 2t), in 1/ns.

    At the sweet spot the detuning noise is transverse to the quantization
    axis and the S_z term is exactly zero.
    """
    if eps_ac < 0:
        raise ValueError(f"Drive amplitude must be non-negative, got {eps_ac}")
    if t_logical <= 0:
        raise ValueError(f"t_logical must be positive, got {t_logical}")
    omega_ac = angular(eps_ac)
    omega_2t = angular(2.0 * t_logical)
    longitudinal = 0.0 if at_sweet_spot else 2.0 * s_z(omega_ac)
    return longitudinal + s_x(omega_ac + omega_2t) + s_x(abs(omega_ac - omega_2t))


def rate_ratio_cq_cd(kappa: float, p: Literal[1, 2] = 1) -> float:
    """
    Suppression of CQ relative to CD relaxation rates when the quadrupolar
    noise amplitude is kappa times the dipolar one. p = 1 takes the rates to
    scale with amplitude; p = 2 takes them to scale with the spectral density.
    """
    if not 0.0 < kappa <= 1.0:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa}")
    if p not in (1, 2):
        raise ValueError(f"Scaling exponent p must be 1 or 2, got {p}")
    return kappa**p


def t1rho_pair(
    eps_ac: float,
    t_logical: float,
    spectral_amplitude: float,
    kappa: float,
    p: Literal[1, 2] = 1,
    omega_min: float | None = None,
) -> T1rhoPair:
    """CD and CQ rates at the sweet spot from one fluctuator spectrum."""
    s_cd = one_over_f(spectral_amplitude, omega_min)
    s_cq = s_cd.scaled(rate_ratio_cq_cd(kappa, p))
    zero = SpectralDensity()
    return T1rhoPair(
        rate_cd=t1rho_rate(eps_ac, t_logical, zero, s_cd, at_sweet_spot=True),
        rate_cq=t1rho_rate(eps_ac, t_logical, zero, s_cq, at_sweet_spot=True),
    )


def fit_power_law(x: list[float] | np.ndarray, y: list[float] | np.ndarray) -> float:
    """Least-squares slope of log(y) against log(x)."""
    x_arr, y_arr = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x_arr.size < 2 or np.any(x_arr <= 0) or np.any(y_arr <= 0):
        raise ValueError("Power-law fit needs at least two strictly positive points")
    slope, _ = np.polyfit(np.log(x_arr), np.log(y_arr), 1)
    return float(slope)
