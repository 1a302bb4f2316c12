from typing import List

from pydantic import BaseModel, Field, FiniteFloat, field_validator, model_validator

from diskcover.models.geometry import CONTAINMENT_TOLERANCE, Cover, Line


class LineInstance1D(BaseModel):
    """Clients and candidate server sites on the real line."""

    servers: List[FiniteFloat] = Field(min_length=1, description="Server sites t_1..t_m, ascending")
    clients: List[FiniteFloat] = Field(default_factory=list, description="Client positions p_1..p_n, ascending")
    alpha: FiniteFloat = Field(default=1.0, ge=1.0)

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [{"servers": [-1.99, 0.0, 1.99], "clients": [-1.0, 1.0], "alpha": 1.0}]
        },
    }

    @field_validator("servers", "clients")
    @classmethod
    def _ascending(cls, value: List[float]) -> List[float]:
        return sorted(value)


class IntervalCoverState(BaseModel):
    """Right end of the rightmost disk that still extends past the sweep position."""

    rightmost_point: float = Field(description="omega_R, right end of the rightmost extending disk")
    rightmost_radius: float = Field(ge=0.0)
    rightmost_disk_index: int = Field(ge=0, description="Index of the server carrying that disk")


class LineSearchResult(BaseModel):
    line: Line
    cover: Cover
    epsilon: FiniteFloat = Field(default=0.0, ge=0.0, description="Guarantee parameter, 0 for exact-on-line")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _centers_on_line(self) -> "LineSearchResult":
        for disk in self.cover.disks:
            scale = 1.0 + abs(disk.center.x) + abs(disk.center.y)
            if abs(self.line.offset(disk.center)) > CONTAINMENT_TOLERANCE * scale:
                raise ValueError(f"disk center {disk.center.as_tuple()} is off the placement line")
        return self

    @property
    def cost(self) -> float:
        return self.cover.cost
