import math
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

REPORT_COLUMNS = ("instance", "algorithm", "cost", "oracle", "ratio", "runtime_ms", "seed")


class ReportRow(BaseModel):
    instance: str = Field(description="Instance identifier (file stem or generator label)")
    algorithm: str
    cost: float = Field(ge=0.0)
    oracle: Optional[float] = Field(default=None, ge=0.0, description="Reference cost, when an oracle was run")
    ratio: Optional[float] = Field(default=None, description="cost / oracle")
    runtime_ms: float = Field(ge=0.0)
    seed: Optional[int] = None

    model_config = {
        "frozen": True,
        "json_schema_extra": {
            "examples": [
                {
                    "instance": "gg-tight",
                    "algorithm": "gg",
                    "cost": 1.98,
                    "oracle": 1.0,
                    "ratio": 1.98,
                    "runtime_ms": 0.4,
                    "seed": 0,
                }
            ]
        },
    }

    @model_validator(mode="after")
    def _ratio_matches(self) -> "ReportRow":
        if self.oracle is None or self.ratio is None or self.oracle == 0.0:
            return self
        if abs(self.ratio - self.cost / self.oracle) > 1e-12 * max(1.0, abs(self.ratio)):
            raise ValueError("ratio must equal cost / oracle")
        return self

    @classmethod
    def measured(
        cls,
        instance: str,
        algorithm: str,
        cost: float,
        runtime_ms: float,
        oracle: Optional[float] = None,
        seed: Optional[int] = None,
    ) -> "ReportRow":
        ratio = None
        if oracle is not None:
            if oracle > 0.0:
                ratio = cost / oracle
            else:
                # zero-cost optimum: any zero-cost answer is exact
                ratio = 1.0 if cost <= 1e-12 else math.inf
        return cls(
            instance=instance,
            algorithm=algorithm,
            cost=cost,
            oracle=oracle,
            ratio=ratio,
            runtime_ms=runtime_ms,
            seed=seed,
        )

    def sort_key(self):
        return (self.instance, self.algorithm, -1 if self.seed is None else self.seed)


class ExperimentReport(BaseModel):
    rows: List[ReportRow] = Field(default_factory=list)

    def worst_ratio(self, algorithm: str) -> Optional[float]:
        ratios = [r.ratio for r in self.rows if r.algorithm == algorithm and r.ratio is not None]
        return max(ratios) if ratios else None
