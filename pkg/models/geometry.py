"""Device geometry for multipole charge-noise estimates (2D, nm)."""
from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

SILICON_PERMITTIVITY = 11.7
GAAS_PERMITTIVITY = 12.9
SILICON_EFFECTIVE_MASS = 0.19
GAAS_EFFECTIVE_MASS = 0.067

Point = tuple[float, float]


class TripleDotGeometry(BaseModel):
    model_config = ConfigDict(frozen=True)

    positions: tuple[Point, Point, Point]

    @model_validator(mode="after")
    def _distinct_dots(self) -> TripleDotGeometry:
        p = self.positions
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] == p[j]:
                    raise ValueError(f"Dots {i + 1} and {j + 1} coincide at {p[i]}")
        return self

    @property
    def spacing(self) -> float:
        """Mean adjacent spacing d."""
        p = self.positions
        return 0.5 * (math.dist(p[0], p[1]) + math.dist(p[1], p[2]))

    @property
    def center(self) -> Point:
        return self.positions[1]

    @classmethod
    def collinear(cls, d: float, center_x: float = 0.0, center_dx: float = 0.0) -> TripleDotGeometry:
        """Dots on the x axis at center_x - d, center_x + center_dx, center_x + d."""
        return cls(positions=((center_x - d, 0.0), (center_x + center_dx, 0.0), (center_x + d, 0.0)))


class Fluctuator(BaseModel):
    """Monopole charge trap."""
    model_config = ConfigDict(frozen=True)

    position: Point
    relative_permittivity: float = Field(default=SILICON_PERMITTIVITY, gt=0.0)
