"""Run configuration models, one block per command."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

from models.noise import DEFAULT_GRID_N, DEFAULT_KAPPA, DEFAULT_OMEGA_MIN, DEFAULT_RANGE_SIGMAS, QuasistaticNoiseModel
from models.schedule import QubitKind

OutputFormat = Literal["csv", "json"]
Axis = Literal["x", "y", "z"]
Point = tuple[float, float]


def _odd_grid(value: int) -> int:
    if value % 2 == 0:
        raise ValueError(f"grid_n must be odd so that zero noise is sampled, got {value}")
    return value


class _RunBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    output_path: str | None = None
    format: OutputFormat = "csv"


class NoiseBlock(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    sigma_eps_ghz: float = Field(default=0.0, ge=0.0, le=100.0)
    kappa: float = Field(default=DEFAULT_KAPPA, ge=0.0, le=1.0)
    grid_n: int = Field(default=DEFAULT_GRID_N, ge=1, le=401)
    range_sigmas: float = Field(default=DEFAULT_RANGE_SIGMAS, gt=0.0, le=12.0)
    correlated: bool = True

    @field_validator("grid_n")
    @classmethod
    def _odd(cls, value: int) -> int:
        return _odd_grid(value)

    def to_model(self) -> QuasistaticNoiseModel:
        return QuasistaticNoiseModel(**self.model_dump())


class SpectrumConfig(_RunBase):
    command: Literal["spectrum"]
    t_a_ghz: float = Field(ge=0.0, le=1000.0)
    t_b_ghz: float = Field(ge=0.0, le=1000.0)
    eps_d_ghz: float = Field(default=0.0, ge=-1000.0, le=1000.0)
    eps_q_min_ghz: float = Field(ge=-1000.0, le=1000.0)
    eps_q_max_ghz: float = Field(ge=-1000.0, le=1000.0)
    n_points: int = Field(default=201, ge=2, le=100_000)

    @model_validator(mode="after")
    def _ordered_range(self) -> SpectrumConfig:
        if self.eps_q_max_ghz <= self.eps_q_min_ghz:
            raise ValueError("eps_q_max_ghz must exceed eps_q_min_ghz")
        return self


class GateConfig(_RunBase):
    command: Literal["gate"]
    gate: Literal["bare_x", "composite_xpi", "z", "schedule"]
    kind: QubitKind = "CQ"
    angle_rad: float = Field(default=math.pi, gt=0.0, le=8.0 * math.pi)
    t_x_ghz: float = Field(default=10.0, gt=0.0, le=1000.0)
    eps_z_ghz: float = Field(default=2.0 * math.pi * 10.0, gt=0.0, le=10_000.0)
    schedule_path: str | None = None
    target_axis: Axis = "x"
    noise: NoiseBlock = NoiseBlock()

    @model_validator(mode="after")
    def _schedule_source(self) -> GateConfig:
        if self.gate == "schedule":
            if self.schedule_path is None:
                raise ValueError("gate 'schedule' needs schedule_path")
            if not Path(self.schedule_path).is_file():
                raise ValueError(f"Schedule file not found: {self.schedule_path}")
        if self.gate == "composite_xpi" and self.kind != "CQ":
            raise ValueError("The composite X_pi is defined for the CQ qubit only")
        return self


class SweepConfig(_RunBase):
    command: Literal["sweep"]
    sigma_eps_ghz: list[float] = Field(min_length=1)
    # t for the double dot, t_a = t_b for the triple dot
    coupling_ghz: float = Field(default=10.0, gt=0.0, le=1000.0)
    kappa: float = Field(default=DEFAULT_KAPPA, ge=0.0, le=1.0)
    grid_n: int = Field(default=DEFAULT_GRID_N, ge=1, le=401)
    range_sigmas: float = Field(default=DEFAULT_RANGE_SIGMAS, gt=0.0, le=12.0)
    correlated: bool = True

    @field_validator("grid_n")
    @classmethod
    def _odd(cls, value: int) -> int:
        return _odd_grid(value)

    @field_validator("sigma_eps_ghz")
    @classmethod
    def _sigma_range(cls, values: list[float]) -> list[float]:
        for sigma in values:
            if not 0.0 <= sigma <= 100.0:
                raise ValueError(f"sigma_eps_ghz entries must lie in [0, 100], got {sigma}")
        return values


class T1rhoConfig(_RunBase):
    command: Literal["t1rho"]
    eps_ac_ghz: list[float] = Field(min_length=1)
    t_logical_ghz: float = Field(gt=0.0, le=1000.0)
    spectral_amplitude: float = Field(ge=0.0)
    kappa: float = Field(default=DEFAULT_KAPPA, gt=0.0, le=1.0)
    p: Literal[1, 2] = 1
    omega_min: float = Field(default=DEFAULT_OMEGA_MIN, gt=0.0)

    @field_validator("eps_ac_ghz")
    @classmethod
    def _non_negative(cls, values: list[float]) -> list[float]:
        if any(v < 0 for v in values):
            raise ValueError("eps_ac_ghz entries must be non-negative")
        return values


class GeometryConfig(_RunBase):
    command: Literal["geometry"]
    dots_nm: tuple[Point, Point, Point]
    fluctuators_nm: list[Point] = Field(min_length=1)
    epsilon_r: float = Field(default=11.7, gt=0.0, le=1000.0)


class CalibrateConfig(_RunBase):
    command: Literal["calibrate"]
    format: OutputFormat = "json"
    family: Literal["x_duration", "z_duration", "x_coupling_duration", "composite_eps_z"]
    kind: QubitKind = "CQ"
    t_x_ghz: float | None = Field(default=None, gt=0.0)
    eps_z_ghz: float | None = Field(default=None, gt=0.0)
    target_axis: Axis = "x"
    target_angle_rad: float = math.pi
    bounds: list[tuple[float, float]] = Field(min_length=1)
    initial: list[float] | None = None
    tolerance: float = Field(default=1e-10, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _family_arguments(self) -> CalibrateConfig:
        if self.family == "x_duration" and self.t_x_ghz is None:
            raise ValueError("family 'x_duration' needs t_x_ghz")
        if self.family == "z_duration" and self.eps_z_ghz is None:
            raise ValueError("family 'z_duration' needs eps_z_ghz")
        if self.family == "composite_eps_z" and self.kind != "CQ":
            raise ValueError("family 'composite_eps_z' is defined for the CQ qubit only")
        expected = 2 if self.family == "x_coupling_duration" else 1
        if len(self.bounds) != expected:
            raise ValueError(f"family '{self.family}' has {expected} free parameter(s), got {len(self.bounds)} bounds")
        if self.family in ("x_coupling_duration", "composite_eps_z") and self.bounds[0][0] <= 0:
            raise ValueError(f"family '{self.family}' needs a strictly positive lower bound on its first parameter")
        return self


class TwoQubitConfig(_RunBase):
    command: Literal["twoqubit"]
    t2_ghz: float = Field(gt=0.0, le=1000.0)
    j_ghz: float = Field(ge=0.0, le=10_000.0)
    far_detuning_ghz: float = Field(lt=0.0, ge=-1e6)
    idle_ns: float = Field(default=1.0, ge=0.0, le=1e6)


RunConfig = Annotated[
    Union[
        SpectrumConfig,
        GateConfig,
        SweepConfig,
        T1rhoConfig,
        GeometryConfig,
        CalibrateConfig,
        TwoQubitConfig,
    ],
    Field(discriminator="command"),
]

RUN_CONFIG_ADAPTER: TypeAdapter[RunConfig] = TypeAdapter(RunConfig)


def parse_run_config(data: dict) -> RunConfig:
    return RUN_CONFIG_ADAPTER.validate_python(data)


def load_run_config(path: str | Path) -> RunConfig:
    """Read and validate one JSON config document."""
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("A run config must be a JSON object")
    return parse_run_config(data)
