import math
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, FiniteFloat, model_validator

from diskcover.models.geometry import L2, Cover, Disk, Line, Metric, Point
from diskcover.models.line import LineSearchResult
from diskcover.models.tour import CoveringTour, closed_tour_length

SolutionKind = Literal["cover", "line", "tour"]


class DiskRecord(BaseModel):
    center: Point
    radius: FiniteFloat = Field(ge=0.0)

    model_config = {"frozen": True}


class SolutionDocument(BaseModel):
    """On-disk form of a Cover, LineSearchResult or CoveringTour."""

    algorithm: str
    kind: SolutionKind = "cover"
    cost: FiniteFloat = Field(ge=0.0)
    alpha: FiniteFloat = Field(default=1.0, ge=1.0)
    metric: Metric = Field(default=L2)
    disks: List[DiskRecord] = Field(default_factory=list)
    tour: Optional[List[Point]] = None
    tour_length: Optional[FiniteFloat] = None
    tour_weight: Optional[FiniteFloat] = Field(default=None, gt=0.0)
    line: Optional[Line] = None
    epsilon: Optional[FiniteFloat] = None
    edge_length: Optional[FiniteFloat] = Field(default=None, ge=0.0, description="square covers: cumulative edge length")
    area: Optional[FiniteFloat] = Field(default=None, ge=0.0, description="square covers: total square area")
    area_ratio: Optional[FiniteFloat] = Field(default=None, ge=0.0, description="square covers: area over one square per client")

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [
                {
                    "algorithm": "dp-linear",
                    "kind": "cover",
                    "cost": 2.0,
                    "alpha": 1.0,
                    "metric": {"p": 2.0},
                    "disks": [{"center": [0.0, 0.0], "radius": 1.0}, {"center": [4.0, 0.0], "radius": 1.0}],
                }
            ]
        },
    }

    @model_validator(mode="after")
    def _cost_recomputes(self) -> "SolutionDocument":
        radii = math.fsum(d.radius ** self.alpha for d in self.disks)
        expected = radii
        if self.kind == "tour":
            if self.tour is None or self.tour_weight is None:
                raise ValueError("a tour solution needs tour and tour_weight")
            length = closed_tour_length(self.tour)
            if self.tour_length is not None and abs(length - self.tour_length) > 1e-9 * max(1.0, length):
                raise ValueError("tour_length does not match the tour")
            expected = length + self.tour_weight * radii
        if self.kind == "line" and self.line is None:
            raise ValueError("a line solution needs its line")
        if abs(expected - self.cost) > 1e-9 * max(1.0, expected):
            raise ValueError(f"cost {self.cost} does not match recomputed {expected}")
        return self

    @classmethod
    def from_result(
        cls,
        algorithm: str,
        result: Union[Cover, LineSearchResult, CoveringTour],
        metric: Metric = L2,
        figures: Optional[Dict[str, float]] = None,
    ) -> "SolutionDocument":
        if isinstance(result, CoveringTour):
            return cls(
                algorithm=algorithm,
                kind="tour",
                cost=result.total_cost,
                alpha=result.alpha,
                metric=metric,
                disks=[DiskRecord(center=d.center, radius=d.radius) for d in result.disks],
                tour=list(result.tour),
                tour_length=result.tour_length,
                tour_weight=result.tour_weight,
            )
        line = None
        epsilon = None
        cover = result
        if isinstance(result, LineSearchResult):
            line, epsilon, cover = result.line, result.epsilon, result.cover
        return cls(
            algorithm=algorithm,
            kind="line" if line is not None else "cover",
            cost=cover.cost,
            alpha=cover.alpha,
            metric=metric,
            disks=[DiskRecord(center=d.center, radius=d.radius) for d in cover.disks],
            line=line,
            epsilon=epsilon,
            **(figures or {}),
        )

    def to_disks(self) -> List[Disk]:
        return [Disk(center=d.center, radius=d.radius, metric=self.metric) for d in self.disks]
