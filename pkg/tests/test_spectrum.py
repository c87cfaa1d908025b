"""Tests for exact spectra, fluctuation expansions, sweet spots and leakage."""
import math

import numpy as np
import pytest

from models.params import CdParams, CqParams
from utils.spectrum import (
    expansion_cd,
    expansion_cq,
    find_sweet_spots,
    leakage_overlap,
    spectrum_sweep,
    splitting_cd_exact,
    splitting_cq_exact,
    splitting_derivatives,
)


def _richardson(diff, h: float) -> float:
    return (4.0 * diff(h / 2) - diff(h)) / 3.0


class TestExpansions:
    def test_cd_matches_finite_differences(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            t = rng.uniform(1.0, 20.0)
            eps = rng.uniform(-2.0 * t, 2.0 * t)
            exp = expansion_cd(eps, t)

            def e(x: float) -> float:
                return splitting_cd_exact(CdParams(eps_d=eps + x, t=t))

            h = 1e-2 * t
            first = _richardson(lambda s: (e(s) - e(-s)) / (2 * s), h)
            second = _richardson(lambda s: (e(s) - 2 * e(0.0) + e(-s)) / (2 * s * s), h)
            assert exp.constant == pytest.approx(e(0.0), rel=1e-12)
            assert exp.linear_coeff == pytest.approx(first, rel=1e-6, abs=1e-9)
            assert exp.quadratic_coeff == pytest.approx(second, rel=1e-6)

    def test_cq_matches_finite_differences(self):
        rng = np.random.default_rng(4048)
        for _ in range(100):
            t = rng.uniform(1.0, 20.0)
            eps_q = rng.uniform(-2.0 * t, 2.0 * t)
            exp = expansion_cq(eps_q, t)
            base = CqParams.symmetric(eps_q=eps_q, t_logical=t)

            def e(d_eps_d: float, d_eps_q: float) -> float:
                return splitting_cq_exact(base.with_offsets(d_eps_d, d_eps_q))

            h = 1e-2 * t
            linear = _richardson(lambda s: (e(0.0, s) - e(0.0, -s)) / (2 * s), h)
            quadratic = _richardson(lambda s: (e(s, 0.0) - 2 * e(0.0, 0.0) + e(-s, 0.0)) / (2 * s * s), h)
            assert exp.which_linear_variable == "eps_q"
            assert exp.constant == pytest.approx(e(0.0, 0.0), rel=1e-12)
            assert exp.linear_coeff == pytest.approx(linear, rel=1e-6, abs=1e-9)
            assert exp.quadratic_coeff == pytest.approx(quadratic, rel=1e-6)

    def test_remainder_is_cubic(self):
        t = 2.0
        deltas = np.geomspace(0.01 * t, 0.1 * t, 5)
        cd = expansion_cd(0.5 * t, t)
        cq = expansion_cq(0.5 * t, t)
        base = CqParams.symmetric(eps_q=0.5 * t, t_logical=t)
        cd_rem = []
        for d in deltas:
            expanded = cd.constant + cd.linear_coeff * d + cd.quadratic_coeff * d * d
            cd_rem.append(abs(splitting_cd_exact(CdParams(eps_d=0.5 * t + d, t=t)) - expanded))
        cq_rem = [
            abs(splitting_cq_exact(base.with_offsets(d, 0.0)) - (cq.constant + cq.quadratic_coeff * d * d))
            for d in deltas
        ]
        for remainders in (cd_rem, cq_rem):
            slope = np.polyfit(np.log(deltas), np.log(remainders), 1)[0]
            assert slope > 2.8
            assert np.isfinite(max(r / d**3 for r, d in zip(remainders, deltas)))

    def test_sweet_spot_values(self):
        cd = expansion_cd(0.0, 2.0)
        assert cd.constant == pytest.approx(4.0)
        assert cd.linear_coeff == 0.0
        assert cd.quadratic_coeff == pytest.approx(1.0 / 4.0)
        cq = expansion_cq(0.0, 2.0)
        assert cq.quadratic_coeff == pytest.approx(1.0 / 2.0)

    def test_rejects_zero_coupling(self):
        with pytest.raises(ValueError):
            expansion_cd(1.0, 0.0)
        with pytest.raises(ValueError):
            expansion_cq(1.0, 0.0)


class TestLeakageOverlap:
    def test_closed_form(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            d = rng.uniform(-5.0, 5.0)
            t = rng.uniform(0.1, 20.0)
            assert leakage_overlap(d, t) == pytest.approx(d * d / (d * d + t * t), abs=1e-12)

    def test_even_and_monotone(self):
        t = 3.0
        detunings = np.linspace(0.0, 10.0, 41)
        values = [leakage_overlap(d, t) for d in detunings]
        for d, value in zip(detunings, values):
            assert leakage_overlap(-d, t) == pytest.approx(value, abs=1e-12)
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_limits(self):
        assert leakage_overlap(0.0, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert leakage_overlap(1.0, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_undefined_point(self):
        with pytest.raises(ValueError):
            leakage_overlap(0.0, 0.0)


class TestSweetSpots:
    def test_cq_double_sweet_spot_at_origin(self):
        for t in (1.0, 5.0, 10.0):
            d_eps_d, d_eps_q = splitting_derivatives(CqParams.symmetric(eps_q=0.0, t_logical=t))
            assert abs(d_eps_d) < 1e-8
            assert abs(d_eps_q) < 1e-8

    def test_cd_sweet_spot_at_origin(self):
        t = 5.0
        h = 1e-4 * t
        slope = (splitting_cd_exact(CdParams(eps_d=h, t=t)) - splitting_cd_exact(CdParams(eps_d=-h, t=t))) / (2 * h)
        assert abs(slope) < 1e-8

    def test_search_finds_origin(self):
        (eps_d,) = find_sweet_spots("CD", 3.0)
        assert eps_d == pytest.approx(0.0, abs=1e-6)
        eps_d, eps_q = find_sweet_spots("CQ", 3.0)
        assert eps_d == pytest.approx(0.0, abs=1e-6)
        assert eps_q == pytest.approx(0.0, abs=1e-6)

    def test_search_rejects_zero_coupling(self):
        with pytest.raises(ValueError):
            find_sweet_spots("CQ", 0.0)


class TestSpectrumSweep:
    def test_symmetric_middle_level_is_flat(self):
        rows = spectrum_sweep(2.5, 2.5, 0.0, list(np.linspace(-20.0, 20.0, 41)))
        assert len(rows) == 41
        for row in rows:
            assert row.e_mid == pytest.approx(0.0, abs=1e-12)
            assert row.e_low <= row.e_mid <= row.e_high
            assert row.e_high - row.e_low == pytest.approx(math.sqrt(row.eps_q**2 + 8 * 2.5**2), rel=1e-12)
