"""Pulse schedule models and their JSON wire format."""
from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.params import CdParams, CqParams, TwoQubitParams

QubitKind = Literal["CD", "CQ"]


class PulseSegment(BaseModel):
    """Constant control parameters held for duration_ns; switching between segments is instantaneous."""
    model_config = ConfigDict(frozen=True)

    params: CqParams | CdParams
    duration_ns: float = Field(ge=0.0)

    @property
    def kind(self) -> QubitKind:
        return "CQ" if isinstance(self.params, CqParams) else "CD"


class DriveSegment(BaseModel):
    """
    Microwave burst on eps_q (CQ) or eps_d (CD):
    eps(tau) = eps_bar + eps_ac cos(2 pi nu tau + phase), sampled piecewise-constant.
    """
    model_config = ConfigDict(frozen=True)

    params: CqParams | CdParams
    eps_ac: float = Field(ge=0.0)
    nu: float = Field(ge=0.0)
    phase: float = 0.0
    duration_ns: float = Field(ge=0.0)
    max_step_ns: float = Field(gt=0.0)

    @property
    def kind(self) -> QubitKind:
        return "CQ" if isinstance(self.params, CqParams) else "CD"


class PulseSchedule(BaseModel):
    """Segments applied in order; drive segments are sampled piecewise-constant."""
    model_config = ConfigDict(frozen=True)

    kind: QubitKind
    segments: tuple[PulseSegment | DriveSegment, ...] = ()

    @model_validator(mode="after")
    def _segments_match_kind(self) -> PulseSchedule:
        for index, segment in enumerate(self.segments):
            if segment.kind != self.kind:
                raise ValueError(f"Segment {index} is {segment.kind} but the schedule is {self.kind}")
        return self

    @property
    def total_duration_ns(self) -> float:
        return sum(segment.duration_ns for segment in self.segments)

    @property
    def max_coupling(self) -> float:
        return max((segment.params.max_coupling for segment in self.segments), default=0.0)

    def then(self, other: PulseSchedule) -> PulseSchedule:
        """Concatenate: self is applied first."""
        if other.kind != self.kind:
            raise ValueError(f"Cannot concatenate a {other.kind} schedule onto a {self.kind} schedule")
        return PulseSchedule(kind=self.kind, segments=self.segments + other.segments)


# Wire format: flat segment records, as read and written by the CLI. A record
# carrying eps_ac, nu and max_step_ns (phase optional) is a drive segment.

class _DriveFields(BaseModel):
    model_config = ConfigDict(extra="forbid")

    eps_ac: float | None = Field(default=None, ge=0.0)
    nu: float | None = Field(default=None, ge=0.0)
    phase: float = 0.0
    max_step_ns: float | None = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _complete_drive(self) -> _DriveFields:
        drive = (self.eps_ac, self.nu, self.max_step_ns)
        if any(value is not None for value in drive) and any(value is None for value in drive):
            raise ValueError("A drive segment needs eps_ac, nu and max_step_ns together")
        if self.eps_ac is None and self.phase != 0.0:
            raise ValueError("phase is only meaningful on a drive segment")
        return self

    def _build(self, params: CqParams | CdParams, duration_ns: float) -> PulseSegment | DriveSegment:
        if self.eps_ac is None:
            return PulseSegment(params=params, duration_ns=duration_ns)
        return DriveSegment(
            params=params,
            eps_ac=self.eps_ac,
            nu=self.nu,
            phase=self.phase,
            duration_ns=duration_ns,
            max_step_ns=self.max_step_ns,
        )

    @staticmethod
    def _drive_fields(segment: PulseSegment | DriveSegment) -> dict[str, float]:
        if isinstance(segment, PulseSegment):
            return {}
        return {"eps_ac": segment.eps_ac, "nu": segment.nu, "phase": segment.phase, "max_step_ns": segment.max_step_ns}


class CqSegmentRecord(_DriveFields):
    kind: Literal["CQ"]
    eps_d: float = 0.0
    eps_q: float = 0.0
    t_a: float = Field(default=0.0, ge=0.0)
    t_b: float = Field(default=0.0, ge=0.0)
    duration_ns: float = Field(ge=0.0)

    def to_segment(self) -> PulseSegment | DriveSegment:
        return self._build(CqParams(eps_d=self.eps_d, eps_q=self.eps_q, t_a=self.t_a, t_b=self.t_b), self.duration_ns)


class CdSegmentRecord(_DriveFields):
    kind: Literal["CD"]
    eps_d: float = 0.0
    t: float = Field(default=0.0, ge=0.0)
    duration_ns: float = Field(ge=0.0)

    def to_segment(self) -> PulseSegment | DriveSegment:
        return self._build(CdParams(eps_d=self.eps_d, t=self.t), self.duration_ns)


SegmentRecord = Annotated[Union[CqSegmentRecord, CdSegmentRecord], Field(discriminator="kind")]


class ScheduleDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    segments: list[SegmentRecord]

    def to_schedule(self) -> PulseSchedule:
        if not self.segments:
            raise ValueError("A schedule document needs at least one segment to fix its kind")
        return PulseSchedule(
            kind=self.segments[0].kind,
            segments=tuple(record.to_segment() for record in self.segments),
        )

    @classmethod
    def from_schedule(cls, schedule: PulseSchedule) -> ScheduleDocument:
        records: list[CqSegmentRecord | CdSegmentRecord] = []
        for segment in schedule.segments:
            p = segment.params
            drive = _DriveFields._drive_fields(segment)
            if isinstance(p, CqParams):
                records.append(CqSegmentRecord(kind="CQ", eps_d=p.eps_d, eps_q=p.eps_q, t_a=p.t_a, t_b=p.t_b,
                                               duration_ns=segment.duration_ns, **drive))
            else:
                records.append(CdSegmentRecord(kind="CD", eps_d=p.eps_d, t=p.t,
                                               duration_ns=segment.duration_ns, **drive))
        return cls(segments=records)


class TwoQubitSegment(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: TwoQubitParams
    duration_ns: float = Field(ge=0.0)


class TwoQubitSchedule(BaseModel):
    """Piecewise-constant two-qubit schedule in {C, E} (x) {C, E}; J is constant per segment."""
    model_config = ConfigDict(frozen=True)

    segments: tuple[TwoQubitSegment, ...] = ()

    @property
    def total_duration_ns(self) -> float:
        return sum(segment.duration_ns for segment in self.segments)
