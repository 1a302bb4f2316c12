"""Covering collinear clients with disks centered at fixed server sites on the same line."""
import bisect
import heapq
import math
from typing import Dict, List

import numpy as np
import structlog

from diskcover.models.common import SizeLimitError
from diskcover.models.geometry import CONTAINMENT_TOLERANCE, Cover, Disk, Point
from diskcover.models.line import IntervalCoverState, LineInstance1D

logger = structlog.get_logger(__name__)


def _cover_from_radii(inst: LineInstance1D, radii: Dict[int, float]) -> Cover:
    disks = [
        Disk(center=Point(x=inst.servers[j], y=0.0), radius=max(r, 0.0))
        for j, r in sorted(radii.items())
    ]
    return Cover.of(disks, inst.alpha)


def _closest_server(servers: np.ndarray, p: float) -> int:
    """Index of the nearest server; ties go to the left one."""
    k = int(np.searchsorted(servers, p, side="left"))
    if k == 0:
        return 0
    if k == len(servers):
        return len(servers) - 1
    return k - 1 if p - servers[k - 1] <= servers[k] - p else k


def cc_cover(inst: LineInstance1D) -> Cover:
    """Closest center: every client joins its nearest server."""
    servers = np.asarray(inst.servers)
    clients = np.asarray(inst.clients)
    if len(clients) == 0:
        return Cover.of([], inst.alpha)
    k = np.clip(np.searchsorted(servers, clients, side="left"), 1, max(1, len(servers) - 1))
    if len(servers) == 1:
        owner = np.zeros(len(clients), dtype=int)
    else:
        left, right = servers[k - 1], servers[k]
        owner = np.where(np.abs(clients - left) <= np.abs(right - clients), k - 1, k)
    radius = np.full(len(servers), -1.0)
    np.maximum.at(radius, owner, np.abs(clients - servers[owner]))
    used = {int(j): float(radius[j]) for j in np.flatnonzero(radius >= 0)}
    return _cover_from_radii(inst, used)


def ccg_cover(inst: LineInstance1D) -> Cover:
    """Closest center with growth: a left-to-right sweep that may stretch the rightmost disk."""
    servers = np.asarray(inst.servers)
    radii: Dict[int, float] = {}
    state: IntervalCoverState | None = None
    for p in inst.clients:
        if state is not None and state.rightmost_point >= p - CONTAINMENT_TOLERANCE:
            continue
        j = _closest_server(servers, p)
        to_center = abs(p - servers[j])
        if state is not None and abs(p - state.rightmost_point) <= to_center:
            g = state.rightmost_disk_index
            grown = p - servers[g]
            radii[g] = max(state.rightmost_radius, grown)
            state = IntervalCoverState(rightmost_point=servers[g] + radii[g], rightmost_radius=radii[g], rightmost_disk_index=g)
            continue
        radii[j] = max(radii.get(j, 0.0), to_center)
        right_end = servers[j] + radii[j]
        if state is None or right_end > state.rightmost_point:
            state = IntervalCoverState(rightmost_point=right_end, rightmost_radius=radii[j], rightmost_disk_index=j)
    return _cover_from_radii(inst, radii)


def _find(parent: List[int], i: int) -> int:
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        parent[i], i = root, parent[i]
    return root


class _Uncovered:
    """Union-find over client slots giving the nearest uncovered client on either side."""

    def __init__(self, n: int):
        self.next = list(range(n + 1))  # slot n: nothing to the right
        self.prev = list(range(n + 1))  # shifted by one; slot 0: nothing to the left

    def right_of(self, i: int) -> int:
        return _find(self.next, i)

    def left_of(self, i: int) -> int:
        return _find(self.prev, i + 1) - 1

    def remove(self, i: int) -> None:
        self.next[i] = i + 1
        self.prev[i + 1] = i


def gg_cover(inst: LineInstance1D) -> Cover:
    """Greedy growth: repeatedly capture the client needing the least radial growth."""
    servers = list(map(float, inst.servers))
    clients = list(map(float, inst.clients))
    n, m = len(clients), len(servers)
    if n == 0:
        return Cover.of([], inst.alpha)
    radius = [0.0] * m
    used = [False] * m
    version = [0] * m
    slots = _Uncovered(n)
    first_right = np.searchsorted(clients, servers, side="left").tolist()
    remaining = n
    heap: List[tuple] = []

    def push_candidates(j: int) -> None:
        t, r = servers[j], radius[j]
        k = slots.left_of(first_right[j] - 1)
        if k >= 0:
            heapq.heappush(heap, (max(0.0, t - clients[k] - r), j, 0, k, version[j]))
        k = slots.right_of(first_right[j])
        if k < n:
            heapq.heappush(heap, (max(0.0, clients[k] - t - r), j, 1, k, version[j]))

    for j in range(m):
        push_candidates(j)

    while remaining and heap:
        growth, j, _side, k, ver = heapq.heappop(heap)
        if ver != version[j]:
            continue
        if slots.right_of(k) != k:
            # target got covered by another disk; refresh this server
            version[j] += 1
            push_candidates(j)
            continue
        t = servers[j]
        radius[j] = max(radius[j], abs(clients[k] - t))
        used[j] = True
        lo = bisect.bisect_left(clients, t - radius[j] - CONTAINMENT_TOLERANCE)
        hi = t + radius[j] + CONTAINMENT_TOLERANCE
        i = slots.right_of(lo)
        while i < n and clients[i] <= hi:
            slots.remove(i)
            remaining -= 1
            i = slots.right_of(i + 1)
        version[j] += 1
        push_candidates(j)
    logger.debug("gg_finished", clients=n, servers=m, disks=sum(used))
    return _cover_from_radii(inst, {j: radius[j] for j in range(m) if used[j]})


def exact_1d(inst: LineInstance1D) -> Cover:
    """Optimal server-centered cover by a suffix DP over contiguous client runs.

    A run p_i..p_k is best served by the server nearest its midpoint, at radius
    (p_k - p_i)/2 + |t - mid|; f(r) = r^alpha is increasing so that server wins.
    """
    servers = np.asarray(inst.servers)
    clients = np.asarray(inst.clients)
    n = len(clients)
    if n == 0:
        return Cover.of([], inst.alpha)
    best = np.full(n + 1, math.inf)
    best[n] = 0.0
    choice_k = np.zeros(n, dtype=int)
    choice_j = np.zeros(n, dtype=int)
    choice_r = np.zeros(n)
    for i in range(n - 1, -1, -1):
        ends = clients[i:]
        mids = (clients[i] + ends) / 2.0
        k = np.clip(np.searchsorted(servers, mids, side="left"), 1, max(1, len(servers) - 1))
        if len(servers) == 1:
            j = np.zeros(len(mids), dtype=int)
        else:
            j = np.where(mids - servers[k - 1] <= servers[k] - mids, k - 1, k)
        r = np.maximum(np.abs(clients[i] - servers[j]), np.abs(ends - servers[j]))
        total = r ** inst.alpha + best[i + 1 :]
        pick = int(np.argmin(total))
        best[i] = total[pick]
        choice_k[i], choice_j[i], choice_r[i] = i + pick, int(j[pick]), float(r[pick])
    radii: Dict[int, float] = {}
    i = 0
    while i < n:
        j = int(choice_j[i])
        radii[j] = max(radii.get(j, 0.0), float(choice_r[i]))
        i = int(choice_k[i]) + 1
    return _cover_from_radii(inst, radii)


def exhaustive_1d(inst: LineInstance1D, max_assignments: int = 2_000_000) -> Cover:
    """Brute force over every client-to-server assignment."""
    servers = np.asarray(inst.servers)
    clients = np.asarray(inst.clients)
    n, m = len(clients), len(servers)
    if n == 0:
        return Cover.of([], inst.alpha)
    total = m ** n
    if total > max_assignments:
        raise SizeLimitError(
            f"exhaustive 1D oracle would enumerate {total} assignments (limit {max_assignments})",
            details={"clients": n, "servers": m},
        )
    dist = np.abs(clients[:, None] - servers[None, :])
    best_cost, best_assign = math.inf, None
    chunk = 65536
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk))
        assign = np.stack(np.unravel_index(codes, (m,) * n), axis=1) if n > 1 else codes[:, None]
        d = dist[np.arange(n)[None, :], assign]
        radii = np.stack([np.where(assign == s, d, -1.0).max(axis=1) for s in range(m)], axis=1)
        cost = np.where(radii >= 0, np.maximum(radii, 0.0) ** inst.alpha, 0.0).sum(axis=1)
        pick = int(np.argmin(cost))
        if cost[pick] < best_cost:
            best_cost, best_assign = float(cost[pick]), assign[pick]
    radii_map: Dict[int, float] = {}
    for c, s in enumerate(best_assign):
        radii_map[int(s)] = max(radii_map.get(int(s), 0.0), float(dist[c, s]))
    return _cover_from_radii(inst, radii_map)


def ccg_tight_instance(epsilon: float, density: int = 50) -> LineInstance1D:
    """One optimal unit disk at 0; CCG pays close to 3 as epsilon -> 0 and density grows."""
    dense = [-1.0 + i / density for i in range(1, density)]
    return LineInstance1D(
        servers=[-2.0 + epsilon, 0.0, 2.0 - epsilon],
        clients=[-1.0, *dense, 1.0],
    )


def gg_tight_instance(epsilon: float) -> LineInstance1D:
    return LineInstance1D(servers=[-2.0 + epsilon, 0.0, 2.0 - epsilon], clients=[-1.0, 1.0])
