"""Noise-model configuration types."""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

DEFAULT_KAPPA = 1.0 / 40.0
DEFAULT_GRID_N = 41
DEFAULT_RANGE_SIGMAS = 6.0
DEFAULT_OMEGA_MIN = 1e-6


class QuasistaticNoiseModel(BaseModel):
    """
    Gaussian quasistatic detuning noise.

    sigma_eps_ghz is the standard deviation of d_eps_d. With correlated=True
    (default) d_eps_q = kappa * d_eps_d on every grid point; otherwise d_eps_q
    is sampled on its own grid with standard deviation kappa * sigma.
    """
    model_config = ConfigDict(frozen=True)

    sigma_eps_ghz: float = Field(default=0.0, ge=0.0)
    kappa: float = Field(default=DEFAULT_KAPPA, ge=0.0)
    grid_n: int = Field(default=DEFAULT_GRID_N, ge=1)
    range_sigmas: float = Field(default=DEFAULT_RANGE_SIGMAS, gt=0.0)
    correlated: bool = True

    @field_validator("grid_n")
    @classmethod
    def _odd_grid(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"grid_n must be odd so that zero noise is sampled, got {value}")
        return value

    def with_sigma(self, sigma_eps_ghz: float) -> QuasistaticNoiseModel:
        return self.model_copy(update={"sigma_eps_ghz": sigma_eps_ghz})


class SpectralDensity(BaseModel):
    """S(omega) = amplitude / max(|omega|, omega_min), omega in rad/ns."""
    model_config = ConfigDict(frozen=True)

    amplitude: float = Field(default=0.0, ge=0.0)
    omega_min: float = Field(default=DEFAULT_OMEGA_MIN, gt=0.0)

    def __call__(self, omega: float) -> float:
        if self.amplitude == 0.0:
            return 0.0
        return self.amplitude / max(abs(omega), self.omega_min)

    def scaled(self, factor: float) -> SpectralDensity:
        return self.model_copy(update={"amplitude": self.amplitude * factor})
