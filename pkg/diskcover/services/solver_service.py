import math
import time
from typing import Callable, Dict, List, NamedTuple, Optional, Protocol, Union

import numpy as np
from pydantic import BaseModel, Field

from diskcover.models.common import UsageError
from diskcover.models.geometry import L2, LINF, Cover, Instance, Metric
from diskcover.models.line import LineInstance1D, LineSearchResult
from diskcover.models.report import ReportRow
from diskcover.models.tour import CoveringTour, GridSpec
from diskcover.services import discrete_1d, line_cover, line_search, mcct
from diskcover.utils.settings import Settings

Result = Union[Cover, LineSearchResult, CoveringTour]


class SolveOptions(BaseModel):
    epsilon: float = Field(default=0.1, gt=0)
    seed: int = 0
    fast: bool = Field(default=False, description="line-const: greedy squares per line instead of the exact DP")
    resolution: Optional[float] = Field(default=None, gt=0, description="sweep-oracle step; settings default when unset")
    grid_spacing: Optional[float] = Field(default=None, gt=0, description="mcct-exact grid; derived from the instance when unset")

    model_config = {"frozen": True}


class Solved(NamedTuple):
    algorithm: str
    result: Result
    metric: Metric
    cost: float
    runtime_ms: float
    figures: Optional[Dict[str, float]] = None


def result_cost(result: Result) -> float:
    if isinstance(result, CoveringTour):
        return result.total_cost
    return result.cost


ALGORITHMS = (
    "cc",
    "ccg",
    "gg",
    "exact1d",
    "oracle-1d",
    "dp-linear",
    "dp-super",
    "dp-squares",
    "sg",
    "sgg",
    "fptas-h",
    "h-const",
    "line-const",
    "line-ptas",
    "mcct-circum",
    "mcct-heur",
    "mcct-exact",
    "oracle-line",
    "oracle-squares",
    "sweep-oracle",
)

SQUARE_ALGORITHMS = ("dp-squares", "sg", "sgg", "oracle-squares")

# reference algorithm each approximation is measured against
ORACLES: Dict[str, str] = {
    "cc": "exact1d",
    "ccg": "exact1d",
    "gg": "exact1d",
    "exact1d": "oracle-1d",
    "dp-linear": "oracle-line",
    "dp-super": "oracle-line",
    "dp-squares": "oracle-squares",
    "sg": "dp-squares",
    "sgg": "dp-squares",
    "h-const": "fptas-h",
    "line-const": "sweep-oracle",
    "line-ptas": "sweep-oracle",
    "mcct-circum": "mcct-exact",
    "mcct-heur": "mcct-exact",
}


class SolverServiceProtocol(Protocol):
    def algorithms(self) -> List[str]:
        ...

    def solve(self, algorithm: str, instance: Instance, options: SolveOptions) -> Solved:
        ...

    def measure(
        self, algorithm: str, instance: Instance, options: SolveOptions, with_oracle: bool = False
    ) -> "Measured":
        ...


class Measured(NamedTuple):
    solved: Solved
    row: ReportRow


class SolverService:
    """Dispatches algorithm ids to the covering services and checks that the instance fits the algorithm."""

    def __init__(self, logger, settings: Settings):
        self.logger = logger
        self.settings = settings
        self._table: Dict[str, Callable[[Instance, SolveOptions], Result]] = {
            "cc": lambda inst, o: discrete_1d.cc_cover(self._line_instance(inst, "cc")),
            "ccg": lambda inst, o: discrete_1d.ccg_cover(self._line_instance(inst, "ccg")),
            "gg": lambda inst, o: discrete_1d.gg_cover(self._line_instance(inst, "gg")),
            "exact1d": lambda inst, o: discrete_1d.exact_1d(self._line_instance(inst, "exact1d")),
            "oracle-1d": lambda inst, o: discrete_1d.exhaustive_1d(
                self._line_instance(inst, "oracle-1d"), self.settings.oracle_1d_max_assignments
            ),
            "dp-linear": self._dp_linear,
            "dp-super": lambda inst, o: line_cover.dp_superlinear(inst.clients, inst.metric, inst.cost_model),
            "dp-squares": lambda inst, o: line_cover.dp_squares(inst.clients, inst.cost_model),
            "sg": lambda inst, o: line_cover.sg_cover(inst.clients, inst.cost_model),
            "sgg": self._sgg,
            "fptas-h": lambda inst, o: line_search.fptas_horizontal(inst.clients, inst.metric, inst.cost_model, o.epsilon),
            "h-const": lambda inst, o: line_search.horizontal_constant(inst.clients, inst.metric, inst.cost_model),
            "line-const": lambda inst, o: line_search.any_line_constant(
                inst.clients, inst.metric, inst.cost_model, fast=o.fast
            ),
            "line-ptas": lambda inst, o: line_search.any_line_ptas(inst.clients, inst.cost_model, o.epsilon),
            "mcct-circum": lambda inst, o: mcct.circumcenter_solution(inst.clients, self._tour_weight(inst, "mcct-circum")),
            "mcct-heur": lambda inst, o: mcct.cluster_and_tour(
                inst.clients,
                self._tour_weight(inst, "mcct-heur"),
                o.epsilon,
                exact_limit=self.settings.held_karp_max_cities,
            ),
            "mcct-exact": self._mcct_exact,
            "oracle-line": lambda inst, o: line_cover.oracle_line_exact(
                inst.clients, inst.metric, inst.cost_model, self.settings.oracle_line_max_clients
            ),
            "oracle-squares": lambda inst, o: line_cover.oracle_line_exact(
                inst.clients, LINF, inst.cost_model, self.settings.oracle_line_max_clients
            ),
            "sweep-oracle": lambda inst, o: line_search.sweep_oracle(
                inst.clients, inst.cost_model, o.resolution or self.settings.sweep_resolution, inst.metric
            ),
        }

    def algorithms(self) -> List[str]:
        return list(ALGORITHMS)

    @staticmethod
    def _line_instance(inst: Instance, algorithm: str) -> LineInstance1D:
        if not inst.servers:
            raise UsageError(f"algorithm {algorithm!r} needs candidate servers", details={"algorithm": algorithm})
        if not inst.is_one_dimensional:
            raise UsageError(
                f"algorithm {algorithm!r} needs clients and servers on the x-axis", details={"algorithm": algorithm}
            )
        return LineInstance1D(
            servers=[p.x for p in inst.servers], clients=[p.x for p in inst.clients], alpha=inst.alpha
        )

    @staticmethod
    def _tour_weight(inst: Instance, algorithm: str) -> float:
        C = inst.cost_model.tour_weight
        if C is None:
            raise UsageError(f"algorithm {algorithm!r} needs a tour weight", details={"algorithm": algorithm})
        if inst.alpha != 1.0 or not inst.metric.is_euclidean:
            raise UsageError(f"algorithm {algorithm!r} is defined for alpha = 1 and the Euclidean metric")
        return C

    @staticmethod
    def _dp_linear(inst: Instance, o: SolveOptions) -> Cover:
        line_cover.require_linear_cost(inst.cost_model, "dp-linear")
        return line_cover.dp_linear(inst.clients, inst.metric)

    @staticmethod
    def _sgg(inst: Instance, o: SolveOptions) -> Cover:
        line_cover.require_linear_cost(inst.cost_model, "sgg")
        return line_cover.sgg_cover(inst.clients)

    def _mcct_exact(self, inst: Instance, o: SolveOptions) -> CoveringTour:
        C = self._tour_weight(inst, "mcct-exact")
        spacing = o.grid_spacing
        if spacing is None:
            xy = np.array([p.as_tuple() for p in inst.clients])
            side = float((xy.max(axis=0) - xy.min(axis=0)).max())
            spacing = side / 5.0 if side > 0 else 1.0
        return mcct.exact_small_mcct(
            inst.clients,
            C,
            GridSpec(spacing=spacing),
            max_disks=min(inst.max_disks or self.settings.mcct_max_disks, self.settings.mcct_max_disks),
            max_grid_points=self.settings.mcct_max_grid_points,
            max_clients=self.settings.mcct_max_clients,
        )

    @staticmethod
    def _result_metric(algorithm: str, inst: Instance) -> Metric:
        if algorithm in SQUARE_ALGORITHMS:
            return LINF
        if algorithm.startswith("mcct"):
            return L2
        return inst.metric

    def solve(self, algorithm: str, instance: Instance, options: SolveOptions) -> Solved:
        if algorithm not in self._table:
            raise UsageError(f"unknown algorithm {algorithm!r}", details={"known": list(ALGORITHMS)})
        started = time.perf_counter()
        result = self._table[algorithm](instance, options)
        runtime_ms = (time.perf_counter() - started) * 1000.0
        cost = result_cost(result)
        self.logger.info(
            "algorithm_finished", algorithm=algorithm, instance=instance.name, cost=cost, runtime_ms=round(runtime_ms, 3)
        )
        figures = None
        if algorithm in SQUARE_ALGORITHMS:
            figures = line_cover.square_figures(result, instance.clients)
        return Solved(algorithm, result, self._result_metric(algorithm, instance), cost, runtime_ms, figures)

    def measure(self, algorithm: str, instance: Instance, options: SolveOptions, with_oracle: bool = False) -> Measured:
        """Solve and build the report row, running the reference algorithm when asked and one exists."""
        solved = self.solve(algorithm, instance, options)
        oracle: Optional[float] = None
        reference = ORACLES.get(algorithm)
        if with_oracle and reference is not None:
            oracle = self.solve(reference, instance, options).cost
        elif with_oracle:
            self.logger.info("oracle_skipped", algorithm=algorithm, reason="no reference algorithm")
        row = ReportRow.measured(
            instance=instance.name or "instance",
            algorithm=algorithm,
            cost=solved.cost,
            runtime_ms=round(solved.runtime_ms, 3),
            oracle=oracle,
            seed=options.seed,
        )
        if row.ratio is not None and math.isinf(row.ratio):
            self.logger.warning("ratio_unbounded", algorithm=algorithm, instance=instance.name, cost=solved.cost)
        return Measured(solved, row)
