"""Control-parameter models for charge-dipole and charge-quadrupole qubits."""
from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field


class CqParams(BaseModel):
    """Triple-dot (charge quadrupole) control parameters, all in GHz."""
    model_config = ConfigDict(frozen=True)

    eps_d: float = 0.0
    eps_q: float = 0.0
    t_a: float = Field(default=0.0, ge=0.0)
    t_b: float = Field(default=0.0, ge=0.0)

    @property
    def t_logical(self) -> float:
        """<C|H|E>; equals sqrt(2) t_a at t_a = t_b."""
        return (self.t_a + self.t_b) / math.sqrt(2.0)

    @classmethod
    def symmetric(cls, eps_q: float, t_logical: float, eps_d: float = 0.0) -> CqParams:
        """Equal couplings t_a = t_b = t_logical / sqrt(2)."""
        t_half = t_logical / math.sqrt(2.0)
        return cls(eps_d=eps_d, eps_q=eps_q, t_a=t_half, t_b=t_half)

    def with_offsets(self, d_eps_d: float, d_eps_q: float) -> CqParams:
        return self.model_copy(update={"eps_d": self.eps_d + d_eps_d, "eps_q": self.eps_q + d_eps_q})

    @property
    def max_coupling(self) -> float:
        return self.t_logical


class CdParams(BaseModel):
    """Double-dot (charge dipole) control parameters, all in GHz."""
    model_config = ConfigDict(frozen=True)

    eps_d: float = 0.0
    t: float = Field(default=0.0, ge=0.0)

    def with_offsets(self, d_eps_d: float, d_eps_q: float = 0.0) -> CdParams:
        # A double dot has no quadrupolar detuning.
        return self.model_copy(update={"eps_d": self.eps_d + d_eps_d})

    @property
    def max_coupling(self) -> float:
        return self.t


class SitePotentials(BaseModel):
    model_config = ConfigDict(frozen=True)

    u1: float
    u2: float
    u3: float


class LogicalQubit(BaseModel):
    """One CQ qubit reduced to its {C, E} block."""
    model_config = ConfigDict(frozen=True)

    eps_q: float = 0.0
    t_logical: float = Field(default=0.0, ge=0.0)


class TwoQubitParams(BaseModel):
    """Two capacitively coupled CQ qubits with a J sigma_z sigma_z interaction."""
    model_config = ConfigDict(frozen=True)

    q1: LogicalQubit
    q2: LogicalQubit
    j: float = 0.0
