"""Covers with centers restricted to the x-axis: exact DPs over pinned circles, square greedies, and an oracle."""
import bisect
import math
from functools import lru_cache
from typing import Dict, List, NamedTuple, Sequence, Tuple, Union

import numpy as np
import structlog

from diskcover.models.common import PreconditionError, SizeLimitError
from diskcover.models.geometry import CONTAINMENT_TOLERANCE, L2, LINF, CostModel, Cover, Disk, Metric, Point
from diskcover.services.geometry_core import (
    ClientIndex,
    PointLike,
    apex_x,
    as_xy,
    axis_disk,
    circles_above_empty,
    enclosure_matrix,
    lp_lengths,
    normalize_clients,
    pinned_circle_arrays,
)

logger = structlog.get_logger(__name__)

Clients = Union[np.ndarray, Sequence[PointLike]]


class AxisSolution(NamedTuple):
    """Lightweight axis-centered cover, converted to a Cover only when returned."""

    cost: float
    centers: np.ndarray
    radii: np.ndarray

    def to_cover(self, m: Metric, alpha: float) -> Cover:
        order = np.argsort(self.centers, kind="stable")
        disks = [axis_disk(self.centers[i], self.radii[i], m) for i in order]
        return Cover.of(disks, alpha)


_EMPTY = AxisSolution(0.0, np.zeros(0), np.zeros(0))


def solve_linear(xy: np.ndarray, m: Metric) -> AxisSolution:
    """Sum-of-radii optimum over pinned circles with nothing above them."""
    norm = normalize_clients(xy)
    n = len(norm.xs)
    if n == 0:
        return _EMPTY
    cx, r = pinned_circle_arrays(norm.xs, norm.ys, m)
    index = ClientIndex.from_arrays(norm.xs, norm.ys)
    batch = circles_above_empty(index, cx, r, m)
    ids = np.flatnonzero(batch.valid)
    ids = ids[np.argsort(batch.right[ids], kind="stable")]
    rights = batch.right[ids]
    bounds = np.searchsorted(rights, np.arange(n + 1), side="left")
    cost = np.full(n + 1, math.inf)
    cost[0] = 0.0
    back = np.full(n + 1, -1)
    for i in range(n):
        group = ids[bounds[i] : bounds[i + 1]]
        if len(group) == 0:
            continue
        vals = cost[batch.left[group]] + r[group]
        pick = int(np.argmin(vals))
        cost[i + 1] = vals[pick]
        back[i + 1] = group[pick]
    if not math.isfinite(cost[n]):
        raise RuntimeError("no valid chain of pinned circles; clients were not normalized")
    chosen = []
    i = n
    while i > 0:
        c = int(back[i])
        chosen.append(c)
        i = int(batch.left[c])
    chosen.reverse()
    return AxisSolution(float(cost[n]), cx[chosen], r[chosen])


def dp_linear(clients: Clients, m: Metric = L2) -> Cover:
    """Minimum sum of radii cover by disks centered on the x-axis (any L_p metric)."""
    return solve_linear(as_xy(clients), m).to_cover(m, 1.0)


def solve_superlinear(xy: np.ndarray, m: Metric, alpha: float, tolerance: float = CONTAINMENT_TOLERANCE) -> AxisSolution:
    """Chain DP over pinned circles ordered by apex; consecutive circles leave no client uncovered between them."""
    norm = normalize_clients(xy)
    xs, ys = norm.xs, norm.ys
    n = len(xs)
    if n == 0:
        return _EMPTY
    cx, r = pinned_circle_arrays(xs, ys, m)
    ax = apex_x(cx, r, m)
    order = np.lexsort((r, ax))
    cx, r, ax = cx[order], r[order], ax[order]
    k = len(cx)
    inside = enclosure_matrix(xs, ys, cx, r, m, tolerance)
    # apex_in[i, j]: apex of circle i lies strictly inside circle j
    apex_in = lp_lengths(ax[:, None] - cx[None, :], r[:, None], m.p) < r[None, :] - tolerance
    weight = r ** alpha

    cost = np.full(k, math.inf)
    back = np.full(k, -1)
    left_ok = ~np.any((xs[None, :] < ax[:, None]) & ~inside, axis=1)
    cost[left_ok] = weight[left_ok]
    for j in range(k):
        prior = np.flatnonzero(ax[:j] < ax[j])
        if len(prior) == 0:
            continue
        ok = ~apex_in[prior, j] & ~apex_in[j, prior] & np.isfinite(cost[prior])
        prior = prior[ok]
        if len(prior) == 0:
            continue
        strip = (xs[None, :] >= ax[prior, None]) & (xs[None, :] < ax[j])
        empty = ~np.any(strip & ~inside[prior] & ~inside[j][None, :], axis=1)
        prior = prior[empty]
        if len(prior) == 0:
            continue
        vals = cost[prior] + weight[j]
        pick = int(np.argmin(vals))
        if vals[pick] < cost[j]:
            cost[j] = vals[pick]
            back[j] = prior[pick]
    right_ok = ~np.any((xs[None, :] >= ax[:, None]) & ~inside, axis=1)
    final = np.where(right_ok, cost, math.inf)
    last = int(np.argmin(final))
    if not math.isfinite(final[last]):
        raise RuntimeError("no valid chain of pinned circles; clients were not normalized")
    chain = []
    j = last
    while j >= 0:
        chain.append(j)
        j = int(back[j])
    chain.reverse()
    return AxisSolution(float(final[last]), cx[chain], r[chain])


def dp_superlinear(clients: Clients, m: Metric = L2, f: CostModel = CostModel()) -> Cover:
    """Minimum sum of f(r) cover by axis-centered disks for non-decreasing f = r^alpha."""
    return solve_superlinear(as_xy(clients), m, f.alpha).to_cover(m, f.alpha)


def dp_squares(clients: Clients, f: CostModel = CostModel()) -> Cover:
    """Optimal cover by axis-aligned squares centered on the x-axis."""
    return dp_superlinear(clients, LINF, f)


def oracle_line_exact(clients: Clients, m: Metric = L2, f: CostModel = CostModel(), max_clients: int = 12) -> Cover:
    """Exhaustive search: cover the leftmost uncovered client by every pinned circle holding it."""
    xy = as_xy(clients)
    if len(xy) > max_clients:
        raise SizeLimitError(
            f"line oracle supports at most {max_clients} clients, got {len(xy)}",
            details={"clients": len(xy), "limit": max_clients},
        )
    norm = normalize_clients(xy)
    n = len(norm.xs)
    if n == 0:
        return Cover.of([], f.alpha)
    cx, r = pinned_circle_arrays(norm.xs, norm.ys, m)
    inside = enclosure_matrix(norm.xs, norm.ys, cx, r, m)
    masks = [sum(1 << int(c) for c in np.flatnonzero(row)) for row in inside]
    holding = [[k for k, mask in enumerate(masks) if mask >> i & 1] for i in range(n)]
    weight = [float(rr) ** f.alpha for rr in r]
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(covered: int) -> Tuple[float, int]:
        if covered == full:
            return 0.0, -1
        i = (~covered & (covered + 1)).bit_length() - 1
        result = (math.inf, -1)
        for k in holding[i]:
            rest, _ = best(covered | masks[k])
            if weight[k] + rest < result[0]:
                result = (weight[k] + rest, k)
        return result

    chosen: List[int] = []
    covered = 0
    while covered != full:
        _, k = best(covered)
        chosen.append(k)
        covered |= masks[k]
    return AxisSolution(best(0)[0], cx[chosen], r[chosen]).to_cover(m, f.alpha)


def _greedy_order(xy: np.ndarray) -> np.ndarray:
    """Decreasing distance to the axis; ties by lower x, then lower index."""
    return np.lexsort((np.arange(len(xy)), xy[:, 0], -np.abs(xy[:, 1])))


class _Alive:
    """Remaining clients sorted by x with O(alpha(n)) skip-over of removed ones."""

    def __init__(self, xs: np.ndarray):
        self.order = np.argsort(xs, kind="stable")
        self.xs = xs[self.order].tolist()
        self.rank = np.empty(len(xs), dtype=int)
        self.rank[self.order] = np.arange(len(xs))
        self.next = list(range(len(xs) + 1))
        self.removed = np.zeros(len(xs), dtype=bool)

    def _find(self, i: int) -> int:
        root = i
        while self.next[root] != root:
            root = self.next[root]
        while self.next[i] != root:
            self.next[i], i = root, self.next[i]
        return root

    def remove_between(self, lo: float, hi: float) -> None:
        i = self._find(bisect.bisect_left(self.xs, lo))
        while i < len(self.xs) and self.xs[i] <= hi:
            self.removed[self.order[i]] = True
            self.next[i] = i + 1
            i = self._find(i + 1)


def sg_cover(clients: Clients, f: CostModel = CostModel()) -> Cover:
    """Square greedy: each unserved client, farthest first, seeds a square of half-side |y| at its projection."""
    xy = as_xy(clients)
    alive = _Alive(xy[:, 0])
    squares: List[Disk] = []
    for idx in _greedy_order(xy):
        if alive.removed[idx]:
            continue
        x, h = float(xy[idx, 0]), float(abs(xy[idx, 1]))
        squares.append(Disk(center=Point(x=x, y=0.0), radius=h, metric=LINF))
        alive.remove_between(x - h - CONTAINMENT_TOLERANCE, x + h + CONTAINMENT_TOLERANCE)
    squares.sort(key=lambda d: d.center.x)
    return Cover.of(squares, f.alpha)


def sgg_cover(clients: Clients) -> Cover:
    """Square greedy with growth (linear cost).

    A client whose square would overlap an existing one instead stretches the
    neighbour needing the smaller extension, keeping that neighbour's far edge
    fixed; ties stretch the left neighbour.
    """
    xy = as_xy(clients)
    alive = _Alive(xy[:, 0])
    lefts: List[float] = []
    rights: List[float] = []
    for idx in _greedy_order(xy):
        if alive.removed[idx]:
            continue
        x, h = float(xy[idx, 0]), float(abs(xy[idx, 1]))
        pos = bisect.bisect_left(lefts, x)
        grow_left = pos > 0 and rights[pos - 1] > x - h
        grow_right = pos < len(lefts) and lefts[pos] < x + h
        if grow_left and grow_right:
            if x - rights[pos - 1] <= lefts[pos] - x:
                grow_right = False
            else:
                grow_left = False
        if grow_left:
            rights[pos - 1] = max(rights[pos - 1], x)
            lo, hi = lefts[pos - 1], rights[pos - 1]
        elif grow_right:
            lefts[pos] = min(lefts[pos], x)
            lo, hi = lefts[pos], rights[pos]
        else:
            lefts.insert(pos, x - h)
            rights.insert(pos, x + h)
            lo, hi = x - h, x + h
        alive.remove_between(lo - CONTAINMENT_TOLERANCE, hi + CONTAINMENT_TOLERANCE)
    squares = [
        Disk(center=Point(x=(lo + hi) / 2.0, y=0.0), radius=(hi - lo) / 2.0, metric=LINF)
        for lo, hi in zip(lefts, rights)
    ]
    return Cover.of(squares, 1.0)


def edge_length(cover: Cover) -> float:
    """Cumulative square edge length (twice the radius sum)."""
    return 2.0 * cover.radius_sum


def square_area(cover: Cover) -> float:
    return math.fsum((2.0 * d.radius) ** 2 for d in cover.disks)


def square_area_ratio(cover: Cover, clients: Clients) -> float:
    """Area of the cover's squares over the area of one square per client."""
    per_client = math.fsum((2.0 * abs(y)) ** 2 for y in as_xy(clients)[:, 1])
    if per_client == 0.0:
        return 1.0
    return square_area(cover) / per_client


def square_figures(cover: Cover, clients: Clients) -> Dict[str, float]:
    return {
        "edge_length": edge_length(cover),
        "area": square_area(cover),
        "area_ratio": square_area_ratio(cover, clients),
    }


def sgg_area_ratio(clients: Clients) -> float:
    return square_area_ratio(sgg_cover(clients), clients)


def require_linear_cost(f: CostModel, algorithm: str) -> None:
    if f.alpha != 1.0:
        raise PreconditionError(f"{algorithm} is defined for linear cost (alpha = 1), got alpha = {f.alpha}")
