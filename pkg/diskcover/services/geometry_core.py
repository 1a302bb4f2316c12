"""Metric-parametric geometric primitives shared by the covering algorithms.

Axis-centered disks are stored as ``(cx, r)`` arrays internally; the public
functions wrap them in :class:`~diskcover.models.geometry.Disk`.
"""
import math
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from scipy import optimize

from diskcover.models.geometry import CONTAINMENT_TOLERANCE, L2, Disk, Metric, Point

logger = structlog.get_logger(__name__)

PointLike = Union[Point, Sequence[float]]

# cells per (circles x clients) block
_CHUNK_CELLS = 4_000_000


def as_xy(points: Union[np.ndarray, Iterable[PointLike]]) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
        return arr.reshape(-1, 2) if arr.size else np.zeros((0, 2))
    rows = [p.as_tuple() if isinstance(p, Point) else (float(p[0]), float(p[1]) if len(p) > 1 else 0.0) for p in points]
    return np.array(rows, dtype=float).reshape(-1, 2)


def lp_lengths(dx, dy, p: float):
    """Vectorized L_p norm of the vectors (dx, dy)."""
    ax = np.abs(dx)
    ay = np.abs(dy)
    if math.isinf(p):
        return np.maximum(ax, ay)
    if p == 1.0:
        return ax + ay
    if p == 2.0:
        return np.hypot(ax, ay)
    big = np.maximum(ax, ay)
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = big * ((ax / big) ** p + (ay / big) ** p) ** (1.0 / p)
    return np.where(big > 0, scaled, 0.0)


def distance(a: PointLike, b: PointLike, m: Metric = L2) -> float:
    ax, ay = a.as_tuple() if isinstance(a, Point) else a
    bx, by = b.as_tuple() if isinstance(b, Point) else b
    return float(lp_lengths(np.float64(ax - bx), np.float64(ay - by), m.p))


def distances_from(center: PointLike, xy: np.ndarray, m: Metric = L2) -> np.ndarray:
    cx, cy = center.as_tuple() if isinstance(center, Point) else center
    return lp_lengths(xy[:, 0] - cx, xy[:, 1] - cy, m.p)


class NormalizedClients(NamedTuple):
    xs: np.ndarray
    ys: np.ndarray
    source: np.ndarray  # original index of each kept client


def normalize_clients(clients: Union[np.ndarray, Iterable[PointLike]]) -> NormalizedClients:
    """Reflect clients onto y >= 0, sort by x and keep one client per x.

    For equal x the higher client wins (it dominates the lower one for every
    axis-centered disk); exact ties keep the earlier index.
    """
    xy = as_xy(clients)
    if len(xy) == 0:
        return NormalizedClients(np.zeros(0), np.zeros(0), np.zeros(0, dtype=int))
    xs = xy[:, 0]
    ys = np.abs(xy[:, 1])
    idx = np.arange(len(xs))
    order = np.lexsort((idx, -ys, xs))
    xs, ys, idx = xs[order], ys[order], idx[order]
    first = np.ones(len(xs), dtype=bool)
    first[1:] = xs[1:] != xs[:-1]
    return NormalizedClients(xs[first], ys[first], idx[first])


class ClientIndex:
    """Clients sorted by x for range queries; y is taken as |y|."""

    def __init__(self, clients: Union[np.ndarray, Iterable[PointLike]]):
        xy = as_xy(clients)
        order = np.argsort(xy[:, 0], kind="stable")
        self.xs = xy[order, 0]
        self.ys = np.abs(xy[order, 1])

    @classmethod
    def from_arrays(cls, xs: np.ndarray, ys: np.ndarray) -> "ClientIndex":
        index = cls.__new__(cls)
        order = np.argsort(xs, kind="stable")
        index.xs = np.asarray(xs, dtype=float)[order]
        index.ys = np.abs(np.asarray(ys, dtype=float))[order]
        return index

    def __len__(self) -> int:
        return len(self.xs)

    def window(self, lo: float, hi: float, right_open: bool = False) -> slice:
        start = int(np.searchsorted(self.xs, lo, side="left"))
        stop = int(np.searchsorted(self.xs, hi, side="left" if right_open else "right"))
        return slice(start, stop)


def apex_x(cx, r, m: Metric):
    """x-coordinate of the apex of an axis-centered disk."""
    return cx + r if m.is_inf else cx


def axis_disk(cx: float, r: float, m: Metric) -> Disk:
    return Disk(center=Point(x=float(cx), y=0.0), radius=max(float(r), 0.0), metric=m)


def _pair_center_general(xi: float, yi: float, xj: float, yj: float, p: float) -> float:
    def gap(c: float) -> float:
        return float(lp_lengths(xi - c, yi, p) - lp_lengths(xj - c, yj, p))

    span = (xj - xi) + yi + yj + 1.0
    lo, hi = xi - span, xj + span
    while gap(lo) > 0:
        lo -= span
        span *= 2
    while gap(hi) < 0:
        hi += span
        span *= 2
    return optimize.brentq(gap, lo, hi, xtol=1e-12)


def pinned_circle_arrays(xs: np.ndarray, ys: np.ndarray, m: Metric) -> Tuple[np.ndarray, np.ndarray]:
    """Centers and radii of all pinned circles of normalized clients, sorted by (center, radius)."""
    n = len(xs)
    if n == 0:
        return np.zeros(0), np.zeros(0)
    single_c = xs - ys if m.is_inf else xs.copy()
    cs = [single_c]
    rs = [ys.copy()]
    if n > 1:
        i, j = np.triu_indices(n, 1)
        xi, yi, xj, yj = xs[i], ys[i], xs[j], ys[j]
        dx = xj - xi
        if m.is_inf:
            r = np.maximum(np.maximum(yi, yj), dx / 2.0)
            c = xj - r
        elif m.is_manhattan:
            c = (xi + xj + yj - yi) / 2.0
            keep = np.abs(yj - yi) <= dx
            c = c[keep]
            r = np.maximum((c - xi[keep]) + yi[keep], (xj[keep] - c) + yj[keep])
        elif m.is_euclidean:
            c = (xi + xj) / 2.0 + (yj - yi) * (yj + yi) / (2.0 * dx)
            r = np.maximum(np.hypot(xi - c, yi), np.hypot(xj - c, yj))
        else:
            c = np.array([_pair_center_general(a, b, cc, d, m.p) for a, b, cc, d in zip(xi, yi, xj, yj)])
            r = np.maximum(lp_lengths(xi - c, yi, m.p), lp_lengths(xj - c, yj, m.p))
        cs.append(c)
        rs.append(r)
    c = np.concatenate(cs)
    r = np.concatenate(rs)
    keys = np.round(np.column_stack([c, r]), 12)
    _, first = np.unique(keys, axis=0, return_index=True)
    first = np.sort(first)
    c, r = c[first], r[first]
    order = np.lexsort((r, c))
    return c[order], r[order]


def pinned_circles(clients: Union[np.ndarray, Iterable[PointLike]], m: Metric = L2) -> List[Disk]:
    """All leftmost smallest axis-centered disks through one or two clients.

    Clients are normalized first (reflected onto y >= 0, one per x), so
    callers may pass raw clients.
    """
    norm = normalize_clients(clients)
    cx, r = pinned_circle_arrays(norm.xs, norm.ys, m)
    return [axis_disk(c, rr, m) for c, rr in zip(cx, r)]


def _chunks(count: int, width: int):
    step = max(1, _CHUNK_CELLS // max(1, width))
    for start in range(0, count, step):
        yield slice(start, min(count, start + step))


def enclosure_matrix(
    xs: np.ndarray, ys: np.ndarray, cx: np.ndarray, r: np.ndarray, m: Metric, tolerance: float = CONTAINMENT_TOLERANCE
) -> np.ndarray:
    """Boolean matrix [circle, client]: client lies inside the axis-centered circle."""
    out = np.empty((len(cx), len(xs)), dtype=bool)
    for sl in _chunks(len(cx), len(xs)):
        d = lp_lengths(xs[None, :] - cx[sl, None], ys[None, :], m.p)
        out[sl] = d <= r[sl, None] + tolerance
    return out


class AboveEmptyBatch(NamedTuple):
    valid: np.ndarray  # nothing above the circle and it encloses at least one client
    left: np.ndarray  # index of the leftmost enclosed client
    right: np.ndarray  # index of the rightmost enclosed client


def circles_above_empty(
    index: ClientIndex, cx: np.ndarray, r: np.ndarray, m: Metric, tolerance: float = CONTAINMENT_TOLERANCE
) -> AboveEmptyBatch:
    """Batched points_above_circle_empty over many axis-centered circles."""
    xs, ys = index.xs, index.ys
    n = len(xs)
    valid = np.zeros(len(cx), dtype=bool)
    left = np.zeros(len(cx), dtype=int)
    right = np.zeros(len(cx), dtype=int)
    for sl in _chunks(len(cx), n):
        c = cx[sl, None]
        rad = r[sl, None]
        inside = lp_lengths(xs[None, :] - c, ys[None, :], m.p) <= rad + tolerance
        in_extent = (xs[None, :] >= c - rad) & (xs[None, :] <= c + rad)
        above = (in_extent & ~inside).any(axis=1)
        any_inside = inside.any(axis=1)
        lo = np.argmax(inside, axis=1)
        hi = n - 1 - np.argmax(inside[:, ::-1], axis=1)
        contiguous = inside.sum(axis=1) == (hi - lo + 1)
        valid[sl] = ~above & any_inside & contiguous
        left[sl] = lo
        right[sl] = hi
    return AboveEmptyBatch(valid, left, right)


def points_above_circle_empty(index: ClientIndex, d: Disk, tolerance: float = CONTAINMENT_TOLERANCE) -> bool:
    """True iff no client within the disk's x-extent lies outside it."""
    cx, r = d.center.x, d.radius
    sl = index.window(cx - r, cx + r)
    xs, ys = index.xs[sl], index.ys[sl]
    if len(xs) == 0:
        return True
    dist = lp_lengths(xs - cx, ys - d.center.y, d.metric.p)
    return bool(np.all(dist <= r + tolerance))


def region_B_empty(index: ClientIndex, a: Disk, c: Disk, tolerance: float = CONTAINMENT_TOLERANCE) -> bool:
    """True iff no client lies between the apex verticals of ``a`` and ``c`` outside both disks."""
    lo = apex_x(a.center.x, a.radius, a.metric)
    hi = apex_x(c.center.x, c.radius, c.metric)
    if hi <= lo:
        return True
    sl = index.window(lo, hi, right_open=True)
    xs, ys = index.xs[sl], index.ys[sl]
    if len(xs) == 0:
        return True
    in_a = lp_lengths(xs - a.center.x, ys - a.center.y, a.metric.p) <= a.radius + tolerance
    in_c = lp_lengths(xs - c.center.x, ys - c.center.y, c.metric.p) <= c.radius + tolerance
    return bool(np.all(in_a | in_c))


def circumcircle(a: PointLike, b: PointLike, c: PointLike) -> Optional[Tuple[Tuple[float, float], float]]:
    """Circle through three points, or None when they are collinear."""
    a = as_xy([a])[0]
    b = as_xy([b])[0]
    c = as_xy([c])[0]
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(x - a[0], y - a[1]), math.hypot(x - b[0], y - b[1]), math.hypot(x - c[0], y - c[1]))
    return (float(x), float(y)), float(r)


def _in_circle(p, circle) -> bool:
    return circle is not None and math.hypot(p[0] - circle[0], p[1] - circle[1]) <= circle[2] * (1 + 1e-14)


def _diameter_circle(a, b):
    cx, cy = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return (cx, cy, max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1])))


def _cross(px, py, qx, qy, rx, ry) -> float:
    return (qx - px) * (ry - py) - (qy - py) * (rx - px)


def _circle_from_two(points, p, q):
    circ = _diameter_circle(p, q)
    left = right = None
    px, py = p
    qx, qy = q
    for r in points:
        if _in_circle(r, circ):
            continue
        cross = _cross(px, py, qx, qy, r[0], r[1])
        cc = circumcircle(p, q, r)
        if cc is None:
            continue
        c = (cc[0][0], cc[0][1], cc[1])
        if cross > 0.0 and (left is None or _cross(px, py, qx, qy, c[0], c[1]) > _cross(px, py, qx, qy, left[0], left[1])):
            left = c
        elif cross < 0.0 and (right is None or _cross(px, py, qx, qy, c[0], c[1]) < _cross(px, py, qx, qy, right[0], right[1])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _circle_from_one(points, p):
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_circle(q, c):
            c = _diameter_circle(p, q) if c[2] == 0.0 else _circle_from_two(points[: i + 1], p, q)
    return c


def _welzl(xy: np.ndarray, seed: int = 0):
    shuffled = [tuple(row) for row in xy[np.random.default_rng(seed).permutation(len(xy))]]
    c = None
    for i, p in enumerate(shuffled):
        if c is None or not _in_circle(p, c):
            c = _circle_from_one(shuffled[: i + 1], p)
    return c


def smallest_enclosing_disk(points: Union[np.ndarray, Iterable[PointLike]], m: Metric = L2) -> Disk:
    """Minimum-radius L_p disk containing all points; the center is unconstrained."""
    xy = as_xy(points)
    if len(xy) == 0:
        raise ValueError("smallest_enclosing_disk needs at least one point")
    if m.is_inf or m.is_manhattan:
        if m.is_manhattan:
            # L1 in (x, y) is L_inf in (x + y, x - y)
            u, v = xy[:, 0] + xy[:, 1], xy[:, 0] - xy[:, 1]
        else:
            u, v = xy[:, 0], xy[:, 1]
        cu, cv = (u.min() + u.max()) / 2, (v.min() + v.max()) / 2
        r = max(u.max() - u.min(), v.max() - v.min()) / 2
        cx, cy = ((cu + cv) / 2, (cu - cv) / 2) if m.is_manhattan else (cu, cv)
    elif m.is_euclidean:
        cx, cy, r = _welzl(xy)
    else:
        cx, cy, _ = _welzl(xy)
        r0 = float(distances_from((cx, cy), xy, m).max())
        res = optimize.minimize(
            lambda z: z[2],
            x0=np.array([cx, cy, r0]),
            method="SLSQP",
            constraints=[{"type": "ineq", "fun": lambda z: z[2] - lp_lengths(xy[:, 0] - z[0], xy[:, 1] - z[1], m.p)}],
            options={"ftol": 1e-14, "maxiter": 500},
        )
        if res.success:
            cx, cy = float(res.x[0]), float(res.x[1])
        r = float(distances_from((cx, cy), xy, m).max())
        logger.debug("lp_enclosing_disk", p=m.p, converged=bool(res.success), radius=r)
    r = max(float(r), float(distances_from((cx, cy), xy, m).max()))
    return Disk(center=Point(x=float(cx), y=float(cy)), radius=r, metric=m)


def uncovered_clients(
    disks: Sequence[Disk], clients: Union[np.ndarray, Iterable[PointLike]], tolerance: float = CONTAINMENT_TOLERANCE
) -> np.ndarray:
    """Indices of clients no disk contains."""
    xy = as_xy(clients)
    covered = np.zeros(len(xy), dtype=bool)
    for d in disks:
        covered |= distances_from(d.center, xy, d.metric) <= d.radius + tolerance
    return np.flatnonzero(~covered)


def covers(disks: Sequence[Disk], clients: Union[np.ndarray, Iterable[PointLike]], tolerance: float = CONTAINMENT_TOLERANCE) -> bool:
    return len(uncovered_clients(disks, clients, tolerance)) == 0


def convex_hull(points: Union[np.ndarray, Iterable[PointLike]]) -> np.ndarray:
    """Counter-clockwise hull vertices (monotone chain); collinear points dropped."""
    pts = sorted(set(map(tuple, as_xy(points).tolist())))
    if len(pts) <= 2:
        return np.array(pts, dtype=float).reshape(-1, 2)

    def orient(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1], dtype=float)


class Strip(NamedTuple):
    width: float
    direction: Tuple[float, float]  # unit vector along the strip
    anchor: Tuple[float, float]  # a point on the strip's lower boundary


def min_width_strip(points: Union[np.ndarray, Iterable[PointLike]]) -> Strip:
    """Narrowest parallel strip containing the points, one side flush with a hull edge."""
    hull = convex_hull(points)
    if len(hull) == 1:
        return Strip(0.0, (1.0, 0.0), tuple(hull[0]))
    if len(hull) == 2:
        d = hull[1] - hull[0]
        d = d / np.hypot(*d)
        return Strip(0.0, (float(d[0]), float(d[1])), tuple(hull[0]))
    best: Optional[Strip] = None
    for i in range(len(hull)):
        a, b = hull[i], hull[(i + 1) % len(hull)]
        e = (b - a) / np.hypot(*(b - a))
        rel = hull - a
        width = float(np.max(np.abs(e[0] * rel[:, 1] - e[1] * rel[:, 0])))
        if best is None or width < best.width:
            best = Strip(width, (float(e[0]), float(e[1])), (float(a[0]), float(a[1])))
    assert best is not None
    return best


def enclose_in_metric(square: Disk, m: Metric) -> Disk:
    """Smallest L_p disk with the same center that contains an L_inf square."""
    factor = 1.0 if m.is_inf else 2.0 ** (1.0 / m.p)
    return Disk(center=square.center, radius=square.radius * factor, metric=m)
