"""Tests for the CD and CQ Hamiltonians and parameter models."""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from models.params import CdParams, CqParams, SitePotentials
from utils.hamiltonians import (
    C,
    E,
    L,
    detunings,
    h_cd,
    h_cq_even_odd,
    h_cq_position,
    logical_block,
    site_potentials_from_detunings,
    symmetry_residual,
    to_even_odd,
)
from utils.qmath import SIGMA_X, SIGMA_Z


class TestDetunings:
    def test_definitions(self):
        eps_d, eps_q = detunings(SitePotentials(u1=3.0, u2=5.0, u3=-1.0))
        assert eps_d == pytest.approx(2.0)
        assert eps_q == pytest.approx(4.0)

    def test_inverse(self):
        u = site_potentials_from_detunings(1.25, -0.5)
        assert detunings(u) == pytest.approx((1.25, -0.5))
        assert (u.u1 + u.u3) / 2 == 0.0


class TestCqHamiltonian:
    def test_even_odd_closed_form_matches_rotation(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            p = CqParams(
                eps_d=rng.uniform(-20, 20),
                eps_q=rng.uniform(-20, 20),
                t_a=rng.uniform(0, 10),
                t_b=rng.uniform(0, 10),
            )
            np.testing.assert_allclose(h_cq_even_odd(p), to_even_odd(h_cq_position(p)), atol=1e-12)

    def test_symmetric_point_decouples_leakage(self):
        h = h_cq_even_odd(CqParams.symmetric(eps_q=3.0, t_logical=2.0))
        assert h[C, L] == 0 and h[E, L] == 0
        assert h[C, E] == pytest.approx(2.0)

    def test_logical_block_form(self):
        p = CqParams.symmetric(eps_q=1.5, t_logical=0.7)
        expected = 0.75 * (np.eye(2) + SIGMA_Z) + 0.7 * SIGMA_X
        np.testing.assert_allclose(logical_block(p), expected, atol=1e-15)

    def test_t_logical(self):
        assert CqParams(t_a=1.0, t_b=1.0).t_logical == pytest.approx(math.sqrt(2.0))

    def test_symmetry_residual(self):
        assert symmetry_residual(CqParams.symmetric(eps_q=2.0, t_logical=1.0)) == pytest.approx(0.0, abs=1e-15)
        assert symmetry_residual(CqParams(eps_d=0.1, t_a=1.0, t_b=1.0)) > 0
        assert symmetry_residual(CqParams(t_a=1.0, t_b=0.9)) > 0

    def test_rejects_negative_coupling(self):
        with pytest.raises(ValidationError):
            CqParams(t_a=-1.0)

    def test_to_even_odd_requires_three_levels(self):
        with pytest.raises(ValueError, match="3x3"):
            to_even_odd(np.eye(2))


class TestCdHamiltonian:
    def test_form(self):
        np.testing.assert_allclose(h_cd(CdParams(eps_d=2.0, t=0.5)), [[1.0, 0.5], [0.5, -1.0]])

    def test_offsets_ignore_quadrupole(self):
        assert CdParams(eps_d=1.0, t=1.0).with_offsets(0.5, 3.0).eps_d == pytest.approx(1.5)
