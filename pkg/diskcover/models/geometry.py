import math
from typing import Any, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, FiniteFloat, field_serializer, field_validator, model_serializer, model_validator

CONTAINMENT_TOLERANCE = 1e-9


class Point(BaseModel):
    """A location in the plane. Serialized as ``[x, y]``; ``[x]`` reads as ``(x, 0)``."""

    x: FiniteFloat = Field(description="Horizontal coordinate")
    y: FiniteFloat = Field(default=0.0, description="Vertical coordinate")

    model_config = {
        "frozen": True,
        "json_schema_extra": {"examples": [[3.0, 4.0], [-3.0, -2.0], [5.0]]},
    }

    @model_validator(mode="before")
    @classmethod
    def _from_sequence(cls, data: Any) -> Any:
        if isinstance(data, (list, tuple)):
            if len(data) == 1:
                return {"x": data[0], "y": 0.0}
            if len(data) == 2:
                return {"x": data[0], "y": data[1]}
            raise ValueError("a point is [x, y] or [x]")
        return data

    @model_serializer
    def _as_list(self) -> List[float]:
        return [self.x, self.y]

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)


class Metric(BaseModel):
    """L_p metric; ``p`` is a real >= 1 or infinity (written ``"inf"`` in files)."""

    p: float = Field(default=2.0, description="L_p exponent, or 'inf'")

    model_config = {
        "frozen": True,
        "json_schema_extra": {"examples": [{"p": 2}, {"p": 1}, {"p": "inf"}]},
    }

    @field_validator("p", mode="before")
    @classmethod
    def _parse_inf(cls, value: Any) -> Any:
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "+inf"):
            return math.inf
        return value

    @field_validator("p")
    @classmethod
    def _at_least_one(cls, value: float) -> float:
        if math.isnan(value) or value < 1:
            raise ValueError("metric exponent p must be >= 1 or 'inf'")
        return value

    @field_serializer("p")
    def _write_inf(self, value: float):
        return "inf" if math.isinf(value) else value

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)

    @property
    def is_euclidean(self) -> bool:
        return self.p == 2.0

    @property
    def is_manhattan(self) -> bool:
        return self.p == 1.0

    def __str__(self) -> str:
        return "Linf" if self.is_inf else f"L{self.p:g}"

    @classmethod
    def parse(cls, value: Any) -> "Metric":
        if isinstance(value, Metric):
            return value
        if isinstance(value, dict):
            return cls.model_validate(value)
        return cls(p=value)


L1 = Metric(p=1.0)
L2 = Metric(p=2.0)
LINF = Metric(p=math.inf)


class CostModel(BaseModel):
    alpha: FiniteFloat = Field(default=1.0, ge=1.0, description="Radius exponent of f(r) = r^alpha")
    tour_weight: Optional[FiniteFloat] = Field(default=None, gt=0, description="Weight C of the radii in covering-tour cost")

    model_config = {
        "frozen": True,
        "json_schema_extra": {"examples": [{"alpha": 1.0}, {"alpha": 2.0}, {"alpha": 1.0, "tour_weight": 4.0}]},
    }


class Disk(BaseModel):
    center: Point
    radius: FiniteFloat = Field(ge=0.0)
    metric: Metric = Field(default=L2)

    model_config = {
        "frozen": True,
        "json_schema_extra": {"examples": [{"center": [0.0, 0.0], "radius": 1.0, "metric": {"p": 2}}]},
    }

    @property
    def apex(self) -> Point:
        """Highest point, or the upper-right corner for an L_inf square."""
        if self.metric.is_inf:
            return Point(x=self.center.x + self.radius, y=self.center.y + self.radius)
        return Point(x=self.center.x, y=self.center.y + self.radius)

    def contains(self, p: Point, tolerance: float = CONTAINMENT_TOLERANCE) -> bool:
        from diskcover.services.geometry_core import distance

        return distance(self.center, p, self.metric) <= self.radius + tolerance


def _costs_match(stated: float, recomputed: float) -> bool:
    return abs(stated - recomputed) <= 1e-9 * max(1.0, abs(recomputed))


class Cover(BaseModel):
    disks: List[Disk] = Field(default_factory=list)
    cost: FiniteFloat = Field(ge=0.0, description="Sum of radius^alpha over the disks")
    alpha: FiniteFloat = Field(default=1.0, ge=1.0)

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [
                {"disks": [{"center": [0, 0], "radius": 1}, {"center": [4, 0], "radius": 1}], "cost": 2.0, "alpha": 1.0}
            ]
        },
    }

    @model_validator(mode="after")
    def _cost_is_recomputable(self) -> "Cover":
        recomputed = math.fsum(d.radius ** self.alpha for d in self.disks)
        if not _costs_match(self.cost, recomputed):
            raise ValueError(f"cover cost {self.cost} does not match recomputed {recomputed}")
        return self

    @classmethod
    def of(cls, disks: Sequence[Disk], cost_model: CostModel | float = 1.0) -> "Cover":
        alpha = cost_model.alpha if isinstance(cost_model, CostModel) else float(cost_model)
        disks = list(disks)
        return cls(disks=disks, cost=math.fsum(d.radius ** alpha for d in disks), alpha=alpha)

    @property
    def radius_sum(self) -> float:
        return math.fsum(d.radius for d in self.disks)


class Line(BaseModel):
    anchor: Point
    direction: Tuple[FiniteFloat, FiniteFloat] = Field(default=(1.0, 0.0), description="Unit direction vector")

    model_config = {
        "frozen": True,
        "json_schema_extra": {"examples": [{"anchor": [0.0, 1.4024709], "direction": [1.0, 0.0]}]},
    }

    @field_validator("direction")
    @classmethod
    def _unit(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if abs(math.hypot(*value) - 1.0) > 1e-12:
            raise ValueError("line direction must be a unit vector")
        return value

    @classmethod
    def through(cls, a: Point, b: Point) -> "Line":
        dx, dy = b.x - a.x, b.y - a.y
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            raise ValueError("a line needs two distinct points")
        dx, dy = dx / norm, dy / norm
        # canonical orientation: angle in [0, pi)
        if dy < 0 or (dy == 0 and dx < 0):
            dx, dy = -dx, -dy
        return cls(anchor=a, direction=(dx, dy))

    @classmethod
    def horizontal(cls, y: float) -> "Line":
        return cls(anchor=Point(x=0.0, y=y), direction=(1.0, 0.0))

    def offset(self, p: Point) -> float:
        """Signed distance of ``p`` from the line (positive on the left of the direction)."""
        dx, dy = self.direction
        return dx * (p.y - self.anchor.y) - dy * (p.x - self.anchor.x)

    def parameter(self, p: Point) -> float:
        dx, dy = self.direction
        return dx * (p.x - self.anchor.x) + dy * (p.y - self.anchor.y)

    def at(self, t: float) -> Point:
        return Point(x=self.anchor.x + t * self.direction[0], y=self.anchor.y + t * self.direction[1])


class Instance(BaseModel):
    clients: List[Point] = Field(min_length=1, description="Demand points Y")
    servers: Optional[List[Point]] = Field(default=None, description="Candidate server sites X (discrete scenario)")
    metric: Metric = Field(default=L2)
    cost_model: CostModel = Field(default_factory=CostModel)
    max_disks: Optional[int] = Field(default=None, ge=1)
    name: Optional[str] = Field(default=None, description="Identifier used in reports")

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [
                {
                    "clients": [[3, 4], [-3, -2], [102, 2], [98, -2], [200, -2]],
                    "metric": {"p": 2},
                    "cost_model": {"alpha": 1.0},
                    "name": "radicals",
                }
            ]
        },
    }

    @field_validator("servers")
    @classmethod
    def _servers_nonempty(cls, value: Optional[List[Point]]) -> Optional[List[Point]]:
        if value is not None and len(value) == 0:
            raise ValueError("servers, when present, must be nonempty")
        return value

    @property
    def alpha(self) -> float:
        return self.cost_model.alpha

    @property
    def is_one_dimensional(self) -> bool:
        pts = list(self.clients) + list(self.servers or [])
        return all(p.y == 0.0 for p in pts)
