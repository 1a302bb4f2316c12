"""Choosing the placement line: horizontal FPTAS, pair-line constant factor, any-orientation PTAS and a sweep oracle."""
import math
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from diskcover.models.common import ParameterError, PreconditionError
from diskcover.models.geometry import L2, CostModel, Cover, Disk, Line, Metric, Point
from diskcover.models.line import LineSearchResult
from diskcover.services.geometry_core import PointLike, as_xy, enclose_in_metric, min_width_strip
from diskcover.services.line_cover import AxisSolution, sg_cover, sgg_cover, solve_linear, solve_superlinear

logger = structlog.get_logger(__name__)

Clients = Union[np.ndarray, Sequence[PointLike]]
LineMethod = Literal["exact", "sg", "sgg"]

_AXIS_TOL = 1e-15


def _check_frame(direction: np.ndarray, m: Metric) -> None:
    # quarter turns are isometries of every L_p; other rotations only of L2
    if m.is_euclidean:
        return
    if min(abs(direction[0]), abs(direction[1])) > _AXIS_TOL:
        raise ParameterError(f"lines that are not axis-parallel need the Euclidean metric, got {m}")


def _frame(xy: np.ndarray, anchor: np.ndarray, direction: np.ndarray) -> np.ndarray:
    rel = xy - anchor
    u = rel @ direction
    v = direction[0] * rel[:, 1] - direction[1] * rel[:, 0]
    return np.column_stack([u, v])


def _solve_in_frame(frame: np.ndarray, m: Metric, alpha: float, method: LineMethod) -> AxisSolution:
    if method == "exact":
        return solve_linear(frame, m) if alpha == 1.0 else solve_superlinear(frame, m, alpha)
    squares = sgg_cover(frame) if method == "sgg" else sg_cover(frame, CostModel(alpha=alpha))
    enclosing = [enclose_in_metric(d, m) for d in squares.disks]
    centers = np.array([d.center.x for d in enclosing])
    radii = np.array([d.radius for d in enclosing])
    return AxisSolution(float(np.sum(radii ** alpha)), centers, radii)


def _to_world(sol: AxisSolution, anchor: np.ndarray, direction: np.ndarray, m: Metric, alpha: float) -> Cover:
    order = np.argsort(sol.centers, kind="stable")
    disks = [
        Disk(
            center=Point(x=float(anchor[0] + sol.centers[i] * direction[0]), y=float(anchor[1] + sol.centers[i] * direction[1])),
            radius=float(sol.radii[i]),
            metric=m,
        )
        for i in order
    ]
    return Cover.of(disks, alpha)


def _unit(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    return d / math.hypot(d[0], d[1])


def _line_model(anchor: np.ndarray, direction: np.ndarray) -> Line:
    return Line(anchor=Point(x=float(anchor[0]), y=float(anchor[1])), direction=(float(direction[0]), float(direction[1])))


def cover_on_line(
    clients: Clients,
    line: Line,
    m: Metric = L2,
    f: CostModel = CostModel(),
    method: LineMethod = "exact",
) -> Cover:
    """Best (or greedy) cover with every center on ``line``."""
    anchor = np.array(line.anchor.as_tuple())
    direction = _unit(line.direction)
    _check_frame(direction, m)
    sol = _solve_in_frame(_frame(as_xy(clients), anchor, direction), m, f.alpha, method)
    return _to_world(sol, anchor, direction, m, f.alpha)


class _Best:
    """Running minimum over candidate lines; the first candidate wins ties."""

    def __init__(self, cost: float = math.inf):
        self.cost = cost
        self.key: Optional[int] = None
        self.solution: Optional[AxisSolution] = None
        self.anchor: Optional[np.ndarray] = None
        self.direction: Optional[np.ndarray] = None
        self.evaluated = 0

    def offer(self, key: int, sol: AxisSolution, anchor: np.ndarray, direction: np.ndarray) -> None:
        self.evaluated += 1
        if sol.cost < self.cost or (sol.cost == self.cost and self.key is not None and key < self.key):
            self.cost, self.key, self.solution = sol.cost, key, sol
            self.anchor, self.direction = anchor, direction


def _max_offsets(xy: np.ndarray, anchors: np.ndarray, directions: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Largest client distance to each candidate line; a lower bound on its cover radius."""
    out = np.empty(len(anchors))
    for start in range(0, len(anchors), chunk):
        a = anchors[start : start + chunk]
        d = directions[start : start + chunk]
        rel_x = xy[None, :, 0] - a[:, None, 0]
        rel_y = xy[None, :, 1] - a[:, None, 1]
        out[start : start + chunk] = np.abs(d[:, None, 0] * rel_y - d[:, None, 1] * rel_x).max(axis=1)
    return out


def _search_lines(
    xy: np.ndarray,
    anchors: np.ndarray,
    directions: np.ndarray,
    m: Metric,
    alpha: float,
    method: LineMethod,
    best: Optional[_Best] = None,
) -> _Best:
    """Evaluate candidate lines cheapest-bound first, stopping once no bound can beat the incumbent."""
    best = best or _Best()
    if len(anchors) == 0:
        return best
    bound = _max_offsets(xy, anchors, directions) ** alpha
    for key in np.argsort(bound, kind="stable"):
        if bound[key] > best.cost or (bound[key] == best.cost and best.key is not None and key > best.key):
            break
        sol = _solve_in_frame(_frame(xy, anchors[key], directions[key]), m, alpha, method)
        best.offer(int(key), sol, anchors[key], directions[key])
    logger.debug("line_search_finished", candidates=len(anchors), evaluated=best.evaluated, cost=best.cost)
    return best


def _result(best: _Best, m: Metric, alpha: float, epsilon: float) -> LineSearchResult:
    assert best.solution is not None and best.anchor is not None and best.direction is not None
    cover = _to_world(best.solution, best.anchor, best.direction, m, alpha)
    return LineSearchResult(line=_line_model(best.anchor, best.direction), cover=cover, epsilon=epsilon)


def fptas_line_count(n: int, epsilon: float, alpha: float) -> int:
    """Number of strips the vertical extent is cut into."""
    if alpha == 1.0:
        return max(1, math.ceil(2.0 * n / epsilon - 1e-9))
    return max(1, math.ceil(alpha * 2.0 ** (2.0 * alpha - 1.0) * n / epsilon - 1e-9))


def fptas_horizontal(clients: Clients, m: Metric = L2, f: CostModel = CostModel(), epsilon: float = 0.1) -> LineSearchResult:
    """(1 + epsilon)-optimal cover over all horizontal placement lines."""
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    xy = as_xy(clients)
    lo, hi = float(xy[:, 1].min()), float(xy[:, 1].max())
    height = hi - lo
    if height == 0.0:
        ys = np.array([lo])
    else:
        count = fptas_line_count(len(xy), epsilon, f.alpha)
        ys = lo + np.arange(count + 1) * (height / count)
        ys[-1] = hi
    anchors = np.column_stack([np.zeros(len(ys)), ys])
    directions = np.tile([1.0, 0.0], (len(ys), 1))
    best = _search_lines(xy, anchors, directions, m, f.alpha, "exact")
    logger.debug("fptas_horizontal", lines=len(ys), y=float(best.anchor[1]), cost=best.cost)
    return _result(best, m, f.alpha, epsilon)


def horizontal_constant(clients: Clients, m: Metric = L2, f: CostModel = CostModel()) -> LineSearchResult:
    """Best horizontal line among those through a client or halfway between two clients' heights."""
    xy = as_xy(clients)
    ys = np.unique(xy[:, 1])
    mids = (ys[:, None] + ys[None, :]) / 2.0
    ys = np.unique(np.concatenate([ys, mids[np.triu_indices(len(ys), 1)]]))
    anchors = np.column_stack([np.zeros(len(ys)), ys])
    directions = np.tile([1.0, 0.0], (len(ys), 1))
    best = _search_lines(xy, anchors, directions, m, f.alpha, "exact")
    return _result(best, m, f.alpha, 0.0)


def radicals_cost(y: float) -> float:
    """Closed-form optimal cover cost on the line of height y (-2 <= y <= 2) for the clients
    (3, 4), (-3, -2), (102, 2), (98, -2), (200, 2)."""
    return math.sqrt(2 * (y - 1) ** 2 + 18) + math.sqrt(2 * y * y + 8) + abs(2 - y)


def reanchor_cover(
    cover: Cover,
    pivot: PointLike,
    clients: Clients,
    f: CostModel = CostModel(),
    line: Optional[Line] = None,
) -> Tuple[Line, Cover]:
    """Move a line-centered cover onto the line through ``pivot`` and the client of least |slope|.

    Each center is projected onto the new line and every radius doubles, so
    coverage survives and the cost grows by exactly 2^alpha.
    """
    pv = as_xy([pivot])[0]
    xy = as_xy(clients)
    if any(not d.metric.is_euclidean for d in cover.disks):
        raise ParameterError("re-anchoring rotates the cover and needs the Euclidean metric")
    if line is not None:
        direction = _unit(line.direction)
    else:
        offsets = [np.array(d.center.as_tuple()) - pv for d in cover.disks]
        offsets = [o for o in offsets if math.hypot(*o) > 0]
        if not offsets:
            raise ParameterError(
                "every disk is centered on the pivot, so the cover's line is unknown; pass it explicitly",
                details={"pivot": [float(pv[0]), float(pv[1])]},
            )
        direction = _unit(offsets[0])
    frame = _frame(xy, pv, direction)
    away = np.hypot(frame[:, 0], frame[:, 1]) > 0
    if not np.any(away):
        new_dir = direction
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = np.where(frame[:, 0] != 0, np.abs(frame[:, 1] / frame[:, 0]), np.inf)
        slope[~away] = np.nan
        pick = int(np.nanargmin(slope))
        new_dir = _unit(xy[pick] - pv)
    disks = []
    for d in cover.disks:
        rel = np.array(d.center.as_tuple()) - pv
        proj = pv + (rel @ new_dir) * new_dir
        disks.append(Disk(center=Point(x=float(proj[0]), y=float(proj[1])), radius=2.0 * d.radius, metric=d.metric))
    return _line_model(pv, new_dir), Cover.of(disks, f.alpha)


def _zero_cost_result(xy: np.ndarray, anchor: np.ndarray, direction: np.ndarray, alpha: float) -> LineSearchResult:
    """Clients already on one line: one tiny disk per client at its foot point."""
    frame = _frame(xy, anchor, direction)
    sol = AxisSolution(float(np.sum(np.abs(frame[:, 1]) ** alpha)), frame[:, 0], np.abs(frame[:, 1]))
    return LineSearchResult(
        line=_line_model(anchor, direction), cover=_to_world(sol, anchor, direction, L2, alpha), epsilon=0.0
    )


def _unique_rows(xy: np.ndarray) -> np.ndarray:
    _, first = np.unique(xy, axis=0, return_index=True)
    return xy[np.sort(first)]


def _pair_lines(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(len(points), 1)
    d = points[j] - points[i]
    d = d / np.hypot(d[:, 0], d[:, 1])[:, None]
    flip = (d[:, 1] < 0) | ((d[:, 1] == 0) & (d[:, 0] < 0))
    d[flip] *= -1
    return points[i], d


def any_line_constant(clients: Clients, m: Metric = L2, f: CostModel = CostModel(), fast: bool = False) -> LineSearchResult:
    """Best cover over all lines through two clients: at most 4^alpha times optimal (exact per line)."""
    xy = as_xy(clients)
    pts = _unique_rows(xy)
    if len(pts) == 1:
        return _zero_cost_result(xy, pts[0], np.array([1.0, 0.0]), f.alpha)
    if not m.is_euclidean:
        raise ParameterError(f"lines of arbitrary orientation need the Euclidean metric, got {m}")
    anchors, directions = _pair_lines(pts)
    method: LineMethod = "exact" if not fast else ("sgg" if f.alpha == 1.0 else "sg")
    best = _search_lines(xy, anchors, directions, m, f.alpha, method)
    return _result(best, m, f.alpha, 0.0)


def _boundary_points(lo: np.ndarray, hi: np.ndarray, spacing: float) -> np.ndarray:
    """Points every ``spacing`` along the boundary of an axis-parallel rectangle (corners included)."""
    corners = [lo, np.array([hi[0], lo[1]]), hi, np.array([lo[0], hi[1]])]
    points: List[np.ndarray] = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        length = float(np.hypot(*(b - a)))
        steps = max(1, math.ceil(length / spacing - 1e-9))
        t = np.arange(steps)[:, None] / steps
        points.append(a + t * (b - a))
    return np.concatenate(points)


def any_line_ptas(clients: Clients, f: CostModel = CostModel(), epsilon: float = 0.1) -> LineSearchResult:
    """(1 + epsilon)-optimal line of any orientation for linear cost."""
    if f.alpha != 1.0:
        raise PreconditionError(f"the any-orientation scheme is for linear cost, got alpha = {f.alpha}")
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    xy = as_xy(clients)
    n = len(xy)
    strip = min_width_strip(xy)
    e = _unit(strip.direction)
    a = np.array(strip.anchor)
    scale = 1.0 + float(np.abs(xy).max())
    if strip.width <= 1e-12 * scale:
        return _zero_cost_result(xy, a, e, f.alpha)

    constant = any_line_constant(xy, L2, f)
    upper = constant.cost
    opt_hat = max(upper / 4.0, strip.width / 2.0)
    delta = epsilon * opt_hat / n

    # frame: strip along u, center line at v = 0
    nrm = np.array([-e[1], e[0]])
    origin = a + nrm * (strip.width / 2.0)
    frame = _frame(xy, origin, e)
    umin, umax = float(frame[:, 0].min()), float(frame[:, 0].max())
    w, h = umax - umin, strip.width
    if w >= 2.0 * h:
        reach = 4.0 * upper
        ticks = -reach + np.arange(math.ceil(2.0 * reach / delta - 1e-9) + 1) * delta
        s, t = np.meshgrid(ticks, ticks, indexing="ij")
        p = np.column_stack([np.full(s.size, umin), s.ravel()])
        q = np.column_stack([np.full(t.size, umax), t.ravel()])
        case = "wide"
    else:
        mid = np.array([(umin + umax) / 2.0, 0.0])
        half = (w + h) / 2.0
        ring = _boundary_points(mid - half, mid + half, delta)
        i, j = np.triu_indices(len(ring), 1)
        p, q = ring[i], ring[j]
        case = "tall"
    d = q - p
    keep = np.hypot(d[:, 0], d[:, 1]) > 0
    p, d = p[keep], d[keep] / np.hypot(d[keep, 0], d[keep, 1])[:, None]
    # back to world coordinates
    anchors = origin + p[:, :1] * e + p[:, 1:] * nrm
    directions = d[:, :1] * e + d[:, 1:] * nrm
    directions /= np.hypot(directions[:, 0], directions[:, 1])[:, None]

    incumbent = _Best()
    incumbent.offer(
        -1,
        AxisSolution(
            constant.cost,
            np.array([constant.line.parameter(dk.center) for dk in constant.cover.disks]),
            np.array([dk.radius for dk in constant.cover.disks]),
        ),
        np.array(constant.line.anchor.as_tuple()),
        np.array(constant.line.direction),
    )
    incumbent.key = len(anchors)
    best = _search_lines(xy, anchors, directions, L2, 1.0, "exact", incumbent)
    logger.debug("any_line_ptas", case=case, candidates=len(anchors), evaluated=best.evaluated, delta=delta)
    return _result(best, L2, 1.0, epsilon)


def sweep_oracle(
    clients: Clients,
    f: CostModel = CostModel(),
    resolution: float = 0.01,
    m: Metric = L2,
) -> LineSearchResult:
    """Exact per-line covers over a dense grid of orientations and offsets; an upper bound on the best line."""
    if not resolution > 0:
        raise ParameterError(f"resolution must be positive, got {resolution}")
    xy = as_xy(clients)
    pts = _unique_rows(xy)
    if len(pts) == 1:
        return _zero_cost_result(xy, pts[0], np.array([1.0, 0.0]), f.alpha)
    if not m.is_euclidean:
        raise ParameterError(f"the orientation sweep needs the Euclidean metric, got {m}")
    centroid = xy.mean(axis=0)
    reach = float(np.hypot(*(xy - centroid).T).max())
    diameter = 2.0 * reach
    angles = np.arange(math.ceil(1.0 / resolution)) * (math.pi / math.ceil(1.0 / resolution))
    offsets = np.arange(-reach, reach + 1e-12, resolution * diameter)
    theta, off = np.meshgrid(angles, offsets, indexing="ij")
    directions = np.column_stack([np.cos(theta.ravel()), np.sin(theta.ravel())])
    normals = np.column_stack([-directions[:, 1], directions[:, 0]])
    anchors = centroid + normals * off.ravel()[:, None]
    best = _search_lines(xy, anchors, directions, m, f.alpha, "exact")
    return _result(best, m, f.alpha, 0.0)
