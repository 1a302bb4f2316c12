"""Seeded instance generators: random workloads and the tightness families."""
import math
from typing import Any, Callable, Dict, List, Mapping, Optional

import numpy as np

from diskcover.models.common import ParameterError, UsageError
from diskcover.models.geometry import L2, CostModel, Instance, Metric, Point

# (3, 4), (-3, -2), (102, 2), (98, -2) and a fifth client far to the right.
RADICALS_CLIENTS = [(3.0, 4.0), (-3.0, -2.0), (102.0, 2.0), (98.0, -2.0), (200.0, -2.0)]
# fifth client at (200, 2): the variant whose optimum is 8.3327196 at y = 1.4024709
RADICALS_ABOVE_CLIENTS = [(3.0, 4.0), (-3.0, -2.0), (102.0, 2.0), (98.0, -2.0), (200.0, 2.0)]


def _points(rows) -> List[Point]:
    return [Point(x=float(x), y=float(y)) for x, y in rows]


def _positive(params: Mapping[str, Any], key: str, default: float) -> float:
    value = float(params.get(key, default))
    if not value > 0:
        raise ParameterError(f"generator parameter {key} must be positive, got {value}")
    return value


def _count(params: Mapping[str, Any], key: str, default: int) -> int:
    value = int(params.get(key, default))
    if value < 1:
        raise ParameterError(f"generator parameter {key} must be at least 1, got {value}")
    return value


def uniform_square(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    n, side = _count(params, "n", 10), _positive(params, "side", 1.0)
    return {"clients": _points(rng.uniform(0.0, side, size=(n, 2)))}


def gaussian_clusters(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    n, k = _count(params, "n", 12), _count(params, "k", 3)
    side, spread = _positive(params, "side", 1.0), _positive(params, "spread", 0.05)
    centers = rng.uniform(0.0, side, size=(k, 2))
    labels = rng.integers(0, k, size=n)
    return {"clients": _points(centers[labels] + rng.normal(0.0, spread * side, size=(n, 2)))}


def gg_tight(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    eps = _positive(params, "epsilon", 0.01)
    return {
        "clients": _points([(-1.0, 0.0), (1.0, 0.0)]),
        "servers": _points([(-2.0 + eps, 0.0), (0.0, 0.0), (2.0 - eps, 0.0)]),
    }


def ccg_tight(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    eps, density = _positive(params, "epsilon", 0.01), _count(params, "density", 50)
    dense = [(-1.0 + i / density, 0.0) for i in range(1, density)]
    return {
        "clients": _points([(-1.0, 0.0), *dense, (1.0, 0.0)]),
        "servers": _points([(-2.0 + eps, 0.0), (0.0, 0.0), (2.0 - eps, 0.0)]),
    }


def sgg_area(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    n, eps = _count(params, "n", 3), float(params.get("epsilon", 0.1))
    return {"clients": _points([(k * (1.0 + eps), 1.0) for k in range(n)])}


def collinear(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    """Clients and servers on the x-axis (the one-dimensional discrete scenario)."""
    n, m, side = _count(params, "n", 10), _count(params, "m", 5), _positive(params, "side", 1.0)
    xs = np.sort(rng.uniform(0.0, side, size=n))
    ts = np.sort(rng.uniform(0.0, side, size=m))
    return {"clients": _points([(x, 0.0) for x in xs]), "servers": _points([(t, 0.0) for t in ts])}


def circle(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    n, r = _count(params, "n", 8), _positive(params, "r", 1.0)
    cx, cy = float(params.get("cx", 0.0)), float(params.get("cy", 0.0))
    theta = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
    return {"clients": _points(np.column_stack([cx + r * np.cos(theta), cy + r * np.sin(theta)]))}


def radicals(params: Mapping[str, Any], rng: np.random.Generator) -> Dict[str, Any]:
    above = str(params.get("variant", "listed")) == "above"
    return {"clients": _points(RADICALS_ABOVE_CLIENTS if above else RADICALS_CLIENTS)}


GENERATORS: Dict[str, Callable[[Mapping[str, Any], np.random.Generator], Dict[str, Any]]] = {
    "uniform-square": uniform_square,
    "gaussian-clusters": gaussian_clusters,
    "gg-tight": gg_tight,
    "ccg-tight": ccg_tight,
    "sgg-area": sgg_area,
    "collinear": collinear,
    "circle": circle,
    "radicals": radicals,
}


def generate(
    kind: str,
    params: Optional[Mapping[str, Any]] = None,
    seed: int = 0,
    metric: Metric = L2,
    cost_model: CostModel = CostModel(),
) -> Instance:
    """Build a named instance; identical (kind, params, seed) give identical instances."""
    if kind not in GENERATORS:
        raise UsageError(f"unknown generator kind {kind!r}", details={"known": sorted(GENERATORS)})
    params = dict(params or {})
    fields = GENERATORS[kind](params, np.random.default_rng(seed))
    return Instance(metric=metric, cost_model=cost_model, name=f"{kind}-{seed}", **fields)
