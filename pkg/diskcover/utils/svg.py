"""Static SVG drawings of covers, placement lines and tours."""
import math
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from diskcover.models.geometry import Disk, Instance, Line, Point
from diskcover.models.solution import SolutionDocument

_WIDTH = 640
_MARGIN = 20


def svgroot(w: int, h: int) -> ET.Element:
    return ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        width=f"{w}px",
        height=f"{h}px",
        viewBox=f"0 0 {w} {h}",
    )


def _fmt(v: float) -> str:
    return f"{v:.4f}".rstrip("0").rstrip(".")


class _Canvas:
    """World -> pixel mapping with y pointing up."""

    def __init__(self, lo: np.ndarray, hi: np.ndarray):
        span = np.maximum(hi - lo, 1e-9)
        self.scale = (_WIDTH - 2 * _MARGIN) / float(span.max())
        self.lo = lo
        self.height = int(math.ceil(float(span[1]) * self.scale)) + 2 * _MARGIN

    def xy(self, x: float, y: float) -> Tuple[float, float]:
        return _MARGIN + (x - self.lo[0]) * self.scale, self.height - _MARGIN - (y - self.lo[1]) * self.scale

    def path(self, points: Sequence[Tuple[float, float]], closed: bool) -> str:
        px = [self.xy(x, y) for x, y in points]
        d = "M" + " L".join(f"{_fmt(a)} {_fmt(b)}" for a, b in px)
        return d + (" Z" if closed else "")


def _ball_outline(d: Disk, samples: int = 96) -> List[Tuple[float, float]]:
    """Boundary of an L_p ball; exact corners for p = 1 and p = inf."""
    cx, cy, r = d.center.x, d.center.y, d.radius
    if d.metric.is_inf:
        return [(cx - r, cy - r), (cx + r, cy - r), (cx + r, cy + r), (cx - r, cy + r)]
    if d.metric.is_manhattan:
        return [(cx + r, cy), (cx, cy + r), (cx - r, cy), (cx, cy - r)]
    t = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    c, s = np.cos(t), np.sin(t)
    scale = (np.abs(c) ** d.metric.p + np.abs(s) ** d.metric.p) ** (-1.0 / d.metric.p)
    return list(zip(cx + r * scale * c, cy + r * scale * s))


def _bounds(points: np.ndarray, disks: Sequence[Disk]) -> Tuple[np.ndarray, np.ndarray]:
    lo, hi = points.min(axis=0), points.max(axis=0)
    for d in disks:
        lo = np.minimum(lo, [d.center.x - d.radius, d.center.y - d.radius])
        hi = np.maximum(hi, [d.center.x + d.radius, d.center.y + d.radius])
    pad = 0.05 * float(max((hi - lo).max(), 1e-9))
    return lo - pad, hi + pad


def _line_segment(line: Line, lo: np.ndarray, hi: np.ndarray) -> List[Tuple[float, float]]:
    reach = float(np.hypot(*(hi - lo)))
    mid = line.parameter(Point(x=float((lo[0] + hi[0]) / 2), y=float((lo[1] + hi[1]) / 2)))
    a, b = line.at(mid - reach), line.at(mid + reach)
    return [a.as_tuple(), b.as_tuple()]


def render(
    path: Union[str, Path],
    instance: Instance,
    solution: Optional[SolutionDocument] = None,
) -> None:
    """Write an SVG of the clients plus, when given, the solution's disks, line and tour."""
    clients = np.array([p.as_tuple() for p in instance.clients])
    disks = solution.to_disks() if solution is not None else []
    lo, hi = _bounds(clients, disks)
    canvas = _Canvas(lo, hi)
    root = svgroot(_WIDTH, canvas.height)
    ET.SubElement(root, "rect", width="100%", height="100%", fill="white")

    if solution is not None and solution.line is not None:
        g = ET.SubElement(root, "g", stroke="#888", fill="none")
        g.set("stroke-dasharray", "4 3")
        ET.SubElement(g, "path", d=canvas.path(_line_segment(solution.line, lo, hi), closed=False))

    g = ET.SubElement(root, "g", stroke="#1f77b4", fill="#1f77b4")
    g.set("fill-opacity", "0.12")
    for d in disks:
        if d.radius > 0:
            ET.SubElement(g, "path", d=canvas.path(_ball_outline(d), closed=True))

    if solution is not None and solution.tour is not None and len(solution.tour) > 1:
        g = ET.SubElement(root, "g", stroke="#d62728", fill="none")
        ET.SubElement(g, "path", d=canvas.path([p.as_tuple() for p in solution.tour], closed=True))

    if instance.servers:
        g = ET.SubElement(root, "g", fill="#2ca02c")
        for p in instance.servers:
            x, y = canvas.xy(p.x, p.y)
            ET.SubElement(g, "rect", x=_fmt(x - 3), y=_fmt(y - 3), width="6", height="6")

    g = ET.SubElement(root, "g", fill="black")
    for x, y in clients:
        px, py = canvas.xy(float(x), float(y))
        ET.SubElement(g, "circle", cx=_fmt(px), cy=_fmt(py), r="2.5")

    ET.ElementTree(root).write(str(path), encoding="utf-8", xml_declaration=True)
