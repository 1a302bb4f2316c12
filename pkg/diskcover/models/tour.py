import math
from typing import List

from pydantic import BaseModel, Field, FiniteFloat, model_validator

from diskcover.models.geometry import Disk, Point


def closed_tour_length(tour: List[Point]) -> float:
    if len(tour) < 2:
        return 0.0
    return math.fsum(
        math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(tour, tour[1:] + tour[:1])
    )


class CoveringTour(BaseModel):
    """Closed tour through disk centers; cost is tour length plus C times the radius sum."""

    tour: List[Point] = Field(min_length=1, description="Tour vertices in visiting order; the tour closes on itself")
    disks: List[Disk] = Field(default_factory=list)
    tour_length: FiniteFloat = Field(ge=0.0)
    cover_cost: FiniteFloat = Field(ge=0.0, description="Sum of radius^alpha")
    total_cost: FiniteFloat = Field(ge=0.0)
    tour_weight: FiniteFloat = Field(gt=0.0, description="The constant C")
    alpha: FiniteFloat = Field(default=1.0, ge=1.0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _consistent(self) -> "CoveringTour":
        length = closed_tour_length(self.tour)
        if abs(length - self.tour_length) > 1e-9 * max(1.0, length):
            raise ValueError(f"tour_length {self.tour_length} does not match the closed tour length {length}")
        radii = math.fsum(d.radius ** self.alpha for d in self.disks)
        if abs(radii - self.cover_cost) > 1e-9 * max(1.0, radii):
            raise ValueError(f"cover_cost {self.cover_cost} does not match the disks ({radii})")
        expected = self.tour_length + self.tour_weight * self.cover_cost
        if abs(expected - self.total_cost) > 1e-9 * max(1.0, expected):
            raise ValueError(f"total_cost {self.total_cost} != tour_length + C * cover_cost = {expected}")
        on_tour = {v.as_tuple() for v in self.tour}
        for disk in self.disks:
            if disk.center.as_tuple() not in on_tour:
                raise ValueError(f"disk center {disk.center.as_tuple()} is not a tour vertex")
        return self

    @classmethod
    def build(cls, tour: List[Point], disks: List[Disk], tour_weight: float, alpha: float = 1.0) -> "CoveringTour":
        length = closed_tour_length(tour)
        cover_cost = math.fsum(d.radius ** alpha for d in disks)
        return cls(
            tour=tour,
            disks=disks,
            tour_length=length,
            cover_cost=cover_cost,
            total_cost=length + tour_weight * cover_cost,
            tour_weight=tour_weight,
            alpha=alpha,
        )


class GridSpec(BaseModel):
    spacing: FiniteFloat = Field(gt=0.0, description="Grid spacing delta")
    origin: Point = Field(default_factory=lambda: Point(x=0.0, y=0.0))

    model_config = {
        "frozen": True,
        "json_schema_extra": {"examples": [{"spacing": 0.5, "origin": [0.0, 0.0]}]},
    }

    def nearest(self, p: Point) -> Point:
        i = round((p.x - self.origin.x) / self.spacing)
        j = round((p.y - self.origin.y) / self.spacing)
        return Point(x=self.origin.x + i * self.spacing, y=self.origin.y + j * self.spacing)
