"""Minimum-cost covering tours (alpha = 1, Euclidean): tour length plus C times the radius sum."""
import itertools
import math
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from diskcover.models.common import ParameterError, PreconditionError, SizeLimitError
from diskcover.models.geometry import L2, Disk, Point
from diskcover.models.tour import CoveringTour, GridSpec
from diskcover.services.geometry_core import PointLike, as_xy, circumcircle, smallest_enclosing_disk
from diskcover.services.tsp import distance_matrix, solve_tsp

logger = structlog.get_logger(__name__)

Clients = Union[np.ndarray, Sequence[PointLike]]


def _check_weight(C: float) -> None:
    if not (C > 0 and math.isfinite(C)):
        raise ParameterError(f"tour weight C must be a positive number, got {C}")


def _pt(xy) -> Point:
    return Point(x=float(xy[0]), y=float(xy[1]))


def covering_tour_lower_bound(clients: Clients, C: float) -> float:
    """No covering tour costs less than min(4, C) * r(Y)."""
    _check_weight(C)
    return min(4.0, C) * smallest_enclosing_disk(as_xy(clients), L2).radius


def circumcenter_solution(clients: Clients, C: float) -> CoveringTour:
    """Serve everyone from the smallest enclosing disk's center; optimal when C <= 4."""
    _check_weight(C)
    disk = smallest_enclosing_disk(as_xy(clients), L2)
    return CoveringTour.build([disk.center], [disk], C)


def tour_lower_bound_check(p: PointLike, q: PointLike, r: PointLike) -> Tuple[float, float]:
    """Perimeter and circumradius of a triangle that contains its circumcenter."""
    a, b, c = as_xy([p, q, r])
    circle = circumcircle(a, b, c)
    if circle is None:
        raise PreconditionError("the three points are collinear and have no circumcircle")
    for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
        # angle at u must not be obtuse
        dot = float(np.dot(v - u, w - u))
        scale = float(np.hypot(*(v - u)) * np.hypot(*(w - u)))
        if dot < -1e-12 * scale:
            raise PreconditionError(
                "the triangle is obtuse so its circumcenter lies outside it",
                details={"vertex": [float(u[0]), float(u[1])]},
            )
    perimeter = math.hypot(*(b - a)) + math.hypot(*(c - b)) + math.hypot(*(a - c))
    return perimeter, circle[1]


def _snap(tour: CoveringTour, grid: GridSpec) -> CoveringTour:
    grow = grid.spacing * math.sqrt(2.0)
    vertices = [grid.nearest(v) for v in tour.tour]
    disks = [
        Disk(center=grid.nearest(d.center), radius=d.radius + grow, metric=d.metric) for d in tour.disks
    ]
    return CoveringTour.build(vertices, disks, tour.tour_weight, tour.alpha)


def snap_to_grid(
    tour: CoveringTour,
    clients: Clients,
    epsilon: float,
    grid: Optional[GridSpec] = None,
    max_halvings: int = 60,
) -> CoveringTour:
    """Move tour vertices to grid points, growing radii so coverage is kept.

    Without an explicit ``grid`` the spacing starts at epsilon * diam(Y) / (8n)
    and halves until the snapped cost is within (1 + epsilon) of the original.
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    if grid is not None:
        return _snap(tour, grid)
    xy = as_xy(clients)
    diam = float(distance_matrix(xy).max()) if len(xy) > 1 else 0.0
    if diam == 0.0:
        return tour
    spacing = epsilon * diam / (8.0 * len(xy))
    bound = (1.0 + epsilon) * tour.total_cost
    for _ in range(max_halvings):
        snapped = _snap(tour, GridSpec(spacing=spacing))
        if snapped.total_cost <= bound:
            logger.debug("snap_to_grid", spacing=spacing, ratio=snapped.total_cost / max(tour.total_cost, 1e-300))
            return snapped
        spacing /= 2.0
    raise PreconditionError(
        f"no grid within {max_halvings} halvings keeps the snapped cost within 1 + {epsilon} of the tour",
        details={"spacing": spacing, "cost": tour.total_cost},
    )


def _toured(centers: np.ndarray, radii: np.ndarray, C: float, min_gain: float, exact_limit: int) -> CoveringTour:
    _, order = solve_tsp(centers, exact_limit=exact_limit, min_gain=min_gain)
    vertices = [_pt(centers[i]) for i in order]
    disks = [Disk(center=vertices[k], radius=float(radii[i])) for k, i in enumerate(order)]
    return CoveringTour.build(vertices, disks, C)


def _agglomerate(xy: np.ndarray) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (centers, radii) for k = n, n-1, ..., 1 clusters, merging the pair whose union costs least extra radius."""
    clusters: List[List[int]] = [[i] for i in range(len(xy))]
    disks: List[Disk] = [Disk(center=_pt(p), radius=0.0) for p in xy]
    merged = {}

    def merge_cost(a: int, b: int) -> Tuple[float, Disk]:
        key = (tuple(clusters[a]), tuple(clusters[b]))
        if key not in merged:
            union = smallest_enclosing_disk(xy[clusters[a] + clusters[b]], L2)
            merged[key] = (union.radius - disks[a].radius - disks[b].radius, union)
        return merged[key]

    while True:
        yield (
            np.array([d.center.as_tuple() for d in disks]).reshape(-1, 2),
            np.array([d.radius for d in disks]),
        )
        if len(clusters) == 1:
            return
        best: Optional[Tuple[float, int, int, Disk]] = None
        for a, b in itertools.combinations(range(len(clusters)), 2):
            extra, union = merge_cost(a, b)
            if best is None or extra < best[0]:
                best = (extra, a, b, union)
        _, a, b, union = best
        clusters[a] = clusters[a] + clusters[b]
        disks[a] = union
        del clusters[b], disks[b]


def cluster_and_tour(
    clients: Clients,
    C: float,
    epsilon: float = 0.1,
    exact_limit: int = 12,
) -> CoveringTour:
    """Cheapest of: one enclosing disk, a zero-radius tour over the clients, and every agglomerative k-disk tour.

    ``epsilon`` sets the 2-opt stopping threshold relative to the tour scale.
    """
    _check_weight(C)
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    xy = as_xy(clients)
    _, first = np.unique(xy, axis=0, return_index=True)
    sites = xy[np.sort(first)]
    scale = float(distance_matrix(sites).max()) if len(sites) > 1 else 0.0
    min_gain = max(1e-12, epsilon * 1e-3 * scale)

    candidates = [("circumcenter", circumcenter_solution(sites, C))]
    candidates.append(("zero_radius_tour", _toured(sites, np.zeros(len(sites)), C, min_gain, exact_limit)))
    for centers, radii in _agglomerate(sites):
        candidates.append((f"clusters_{len(centers)}", _toured(centers, radii, C, min_gain, exact_limit)))
    name, best = min(candidates, key=lambda item: item[1].total_cost)
    logger.debug("cluster_and_tour", picked=name, total_cost=best.total_cost, candidates=len(candidates))
    return best


def _set_partitions(n: int, max_blocks: int) -> Iterator[List[List[int]]]:
    """Partitions of range(n) into at most ``max_blocks`` blocks (restricted growth strings)."""

    def grow(i: int, blocks: List[List[int]]) -> Iterator[List[List[int]]]:
        if i == n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from grow(i + 1, blocks)
            b.pop()
        if len(blocks) < max_blocks:
            blocks.append([i])
            yield from grow(i + 1, blocks)
            blocks.pop()

    yield from grow(0, [])


def _cyclic_orders(k: int) -> Iterator[Tuple[int, ...]]:
    """Block visiting orders up to rotation and reflection."""
    for rest in itertools.permutations(range(1, k)):
        if len(rest) < 2 or rest[0] < rest[-1]:
            yield (0,) + rest


def grid_points(clients: Clients, grid: GridSpec) -> np.ndarray:
    """Grid points of the client bounding box, widened outward to whole cells."""
    xy = as_xy(clients)
    ox, oy = grid.origin.as_tuple()
    lo = np.floor((xy.min(axis=0) - (ox, oy)) / grid.spacing + 1e-9)
    hi = np.ceil((xy.max(axis=0) - (ox, oy)) / grid.spacing - 1e-9)
    ii, jj = np.meshgrid(np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij")
    return np.column_stack([ox + ii.ravel() * grid.spacing, oy + jj.ravel() * grid.spacing])


def exact_small_mcct(
    clients: Clients,
    C: float,
    grid: GridSpec,
    max_disks: int = 5,
    max_grid_points: int = 40,
    max_clients: int = 8,
) -> CoveringTour:
    """Optimal covering tour with centers on grid points: every client partition, every block order,
    and a layered DP over grid-point choices."""
    _check_weight(C)
    xy = as_xy(clients)
    pts = grid_points(xy, grid)
    if len(pts) > max_grid_points or len(xy) > max_clients or max_disks > 5:
        raise SizeLimitError(
            "covering tour oracle search space too large",
            details={
                "grid_points": len(pts),
                "max_grid_points": max_grid_points,
                "clients": len(xy),
                "max_clients": max_clients,
                "max_disks": max_disks,
            },
        )
    g = len(pts)
    dist = distance_matrix(pts)
    to_client = np.hypot(pts[:, None, 0] - xy[None, :, 0], pts[:, None, 1] - xy[None, :, 1])
    best_cost, best_plan = math.inf, None
    for blocks in _set_partitions(len(xy), max_disks):
        radius = np.stack([to_client[:, b].max(axis=1) for b in blocks])  # (k, g)
        service = C * radius
        if float(service.min(axis=1).sum()) >= best_cost:
            continue
        k = len(blocks)
        for order in _cyclic_orders(k):
            # table[s, h]: cheapest path starting at grid point s, ending at h
            table = np.full((g, g), math.inf)
            table[np.arange(g), np.arange(g)] = service[order[0]]
            steps = []
            for blk in order[1:]:
                cand = table[:, :, None] + dist[None, :, :]
                arg = cand.argmin(axis=1)
                table = np.take_along_axis(cand, arg[:, None, :], axis=1)[:, 0, :] + service[blk][None, :]
                steps.append(arg)
            closing = table + dist.T
            flat = int(np.argmin(closing))
            if closing.flat[flat] < best_cost:
                s, h = divmod(flat, g)
                chosen = [h]
                for arg in reversed(steps):
                    h = int(arg[s, h])
                    chosen.append(h)
                chosen.reverse()
                best_cost = float(closing.flat[flat])
                best_plan = (blocks, order, chosen)
    assert best_plan is not None
    blocks, order, chosen = best_plan
    vertices = [_pt(pts[h]) for h in chosen]
    disks = [
        Disk(center=vertices[i], radius=float(to_client[h, blocks[blk]].max()))
        for i, (blk, h) in enumerate(zip(order, chosen))
    ]
    logger.debug("exact_small_mcct", grid_points=g, disks=len(disks), total_cost=best_cost)
    return CoveringTour.build(vertices, disks, C)
