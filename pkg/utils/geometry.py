"""
Geometry-based charge-noise estimates.

Field amplitudes are supplied pre-multiplied by the electron charge, as energy
gradients in GHz/nm; field_v_per_m_to_ghz_per_nm converts from SI.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from scipy import constants

from models.geometry import SILICON_EFFECTIVE_MASS, Fluctuator, Point, TripleDotGeometry

# 1 J = 1/h Hz; 1 m = 1e9 nm.
_GHZ_PER_JOULE = 1.0 / (constants.h * 1e9)
_NM_PER_M = 1e9


class DetuningFluctuation(NamedTuple):
    d_eps_d: float
    d_eps_q: float

    @property
    def ratio(self) -> float:
        """d_eps_q / d_eps_d; nan where the dipolar shift vanishes."""
        return self.d_eps_q / self.d_eps_d if self.d_eps_d else math.nan


class OscillatorShift(NamedTuple):
    shift_nm: float
    linear_energy_ghz: float
    quadratic_energy_ghz: float


def coulomb_constant_ghz_nm(epsilon_r: float) -> float:
    """e^2 / (4 pi eps0 eps_r) expressed in GHz*nm."""
    k_si = constants.e**2 / (4.0 * math.pi * constants.epsilon_0 * epsilon_r)
    return k_si * _GHZ_PER_JOULE * _NM_PER_M


def field_v_per_m_to_ghz_per_nm(field_v_per_m: float) -> float:
    return constants.e * field_v_per_m * _GHZ_PER_JOULE / _NM_PER_M


def field_ghz_per_nm_to_v_per_m(field_ghz_per_nm: float) -> float:
    return field_ghz_per_nm * _NM_PER_M / (_GHZ_PER_JOULE * constants.e)


def _inverse_distance_difference(f: Point, a: Point, b: Point) -> float:
    """
    1/|f-a| - 1/|f-b| without cancellation:
    r_b - r_a = (r_b^2 - r_a^2)/(r_a + r_b) and r_b^2 - r_a^2 = (a - b).(2f - a - b).
    """
    r_a, r_b = math.dist(f, a), math.dist(f, b)
    sq_diff = (a[0] - b[0]) * (2 * f[0] - a[0] - b[0]) + (a[1] - b[1]) * (2 * f[1] - a[1] - b[1])
    return (sq_diff / (r_a + r_b)) / (r_a * r_b)


def monopole_detunings(g: TripleDotGeometry, f: Fluctuator) -> DetuningFluctuation:
    """
    Site potentials V_i = k / r_i of a point charge combined into
    d_eps_d = (V1 - V3)/2 and d_eps_q = V2 - (V1 + V3)/2.

    On the array axis at distance R from the center dot, on the dot-1 side,
    the ratio is exactly -d/R (+d/R on the dot-3 side).
    """
    p1, p2, p3 = g.positions
    for index, dot in enumerate(g.positions, start=1):
        if math.dist(dot, f.position) == 0.0:
            raise ValueError(f"Fluctuator coincides with dot {index} at {dot}")
    k = coulomb_constant_ghz_nm(f.relative_permittivity)
    pos = f.position
    d_eps_d = 0.5 * k * _inverse_distance_difference(pos, p1, p3)
    d_eps_q = 0.5 * k * (_inverse_distance_difference(pos, p2, p1) + _inverse_distance_difference(pos, p2, p3))
    return DetuningFluctuation(d_eps_d, d_eps_q)


def uniform_field_detunings(
    g: TripleDotGeometry, delta_e_x: float, delta_e_y: float = 0.0
) -> DetuningFluctuation:
    """Site shifts dU_i = -(x_i dE_x + y_i dE_y); for equal spacing d, d_eps_d = d dE_x."""
    shifts = [-(x * delta_e_x + y * delta_e_y) for x, y in g.positions]
    return DetuningFluctuation(
        d_eps_d=(shifts[0] - shifts[2]) / 2.0,
        d_eps_q=shifts[1] - (shifts[0] + shifts[2]) / 2.0,
    )


def asymmetry_quadrupole(g: TripleDotGeometry, delta_e_x: float, delta_e_y: float = 0.0) -> float:
    """d_eps_q = (-x2 + (x1 + x3)/2) dE_x + (-y2 + (y1 + y3)/2) dE_y; zero for equally spaced collinear dots."""
    (x1, y1), (x2, y2), (x3, y3) = g.positions
    return (-x2 + (x1 + x3) / 2.0) * delta_e_x + (-y2 + (y1 + y3) / 2.0) * delta_e_y


def _stiffness_ghz_per_nm2(omega: float, effective_mass: float) -> float:
    """m omega^2 with omega in rad/ns and the mass in electron masses."""
    mass_kg = effective_mass * constants.m_e
    omega_si = omega * 1e9
    return mass_kg * omega_si**2 * _GHZ_PER_JOULE / _NM_PER_M**2


def shifted_oscillator_terms(
    omega: float,
    delta_e: float,
    x_center: float = 0.0,
    effective_mass: float = SILICON_EFFECTIVE_MASS,
) -> OscillatorShift:
    """
    Completing the square of a parabolic dot in a uniform field:
    the center moves by dE/(m omega^2), the site energy gains -x_i dE (independent
    of omega) and -dE^2/(2 m omega^2).
    """
    if omega <= 0:
        raise ValueError(f"Confinement frequency must be positive, got {omega}")
    stiffness = _stiffness_ghz_per_nm2(omega, effective_mass)
    return OscillatorShift(
        shift_nm=delta_e / stiffness,
        linear_energy_ghz=-x_center * delta_e,
        quadratic_energy_ghz=-(delta_e**2) / (2.0 * stiffness),
    )
