from typing import List, Optional

from pydantic import BaseModel, Field, FiniteFloat

from diskcover.models.geometry import L2, CostModel, Instance, Metric, Point


class InstanceDocument(BaseModel):
    """On-disk instance: cost parameters sit at the top level next to the points."""

    name: Optional[str] = None
    metric: Metric = Field(default=L2)
    alpha: FiniteFloat = Field(default=1.0, ge=1.0)
    tour_weight: Optional[FiniteFloat] = Field(default=None, gt=0.0)
    max_disks: Optional[int] = Field(default=None, ge=1)
    clients: List[Point] = Field(min_length=1)
    servers: Optional[List[Point]] = None

    model_config = {
        "extra": "forbid",
        "json_schema_extra": {
            "examples": [
                {"metric": {"p": 2}, "alpha": 1, "clients": [[0, 1]]},
                {"name": "gg-tight", "metric": {"p": 2}, "clients": [[-1], [1]], "servers": [[-1.99], [0], [1.99]]},
            ]
        },
    }

    def to_instance(self) -> Instance:
        return Instance(
            clients=self.clients,
            servers=self.servers,
            metric=self.metric,
            cost_model=CostModel(alpha=self.alpha, tour_weight=self.tour_weight),
            max_disks=self.max_disks,
            name=self.name,
        )

    @classmethod
    def from_instance(cls, instance: Instance) -> "InstanceDocument":
        return cls(
            name=instance.name,
            metric=instance.metric,
            alpha=instance.alpha,
            tour_weight=instance.cost_model.tour_weight,
            max_disks=instance.max_disks,
            clients=list(instance.clients),
            servers=list(instance.servers) if instance.servers is not None else None,
        )
