"""Closed-tour TSP over a handful of points: exact bitmask DP, otherwise nearest neighbour plus 2-opt."""
import math
from typing import List, Tuple

import numpy as np
import structlog

logger = structlog.get_logger(__name__)


def distance_matrix(xy: np.ndarray) -> np.ndarray:
    diff = xy[:, None, :] - xy[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def tour_length(order: List[int], dist: np.ndarray) -> float:
    if len(order) < 2:
        return 0.0
    return math.fsum(float(dist[a, b]) for a, b in zip(order, order[1:] + order[:1]))


def held_karp(dist: np.ndarray) -> Tuple[float, List[int]]:
    """Optimal closed tour starting at city 0."""
    n = len(dist)
    if n <= 3:
        order = list(range(n))
        return tour_length(order, dist), order
    k = n - 1  # cities 1..n-1 live in bit positions 0..k-1
    size = 1 << k
    dp = np.full((size, k), math.inf)
    parent = np.full((size, k), -1, dtype=int)
    inner = dist[1:, 1:]
    for j in range(k):
        dp[1 << j, j] = dist[0, j + 1]
    for mask in range(1, size):
        if mask & (mask - 1) == 0:
            continue
        for j in range(k):
            bit = 1 << j
            if not mask & bit:
                continue
            prev = dp[mask ^ bit] + inner[:, j]
            i = int(np.argmin(prev))
            dp[mask, j], parent[mask, j] = prev[i], i
    closing = dp[size - 1] + dist[1:, 0]
    last = int(np.argmin(closing))
    order: List[int] = []
    mask, j = size - 1, last
    while j >= 0:
        order.append(j + 1)
        mask, j = mask ^ (1 << j), int(parent[mask, j])
    order.append(0)
    order.reverse()
    return float(closing[last]), order


def nearest_neighbor(dist: np.ndarray, start: int = 0) -> List[int]:
    n = len(dist)
    visited = np.zeros(n, dtype=bool)
    order = [start]
    visited[start] = True
    for _ in range(n - 1):
        row = np.where(visited, math.inf, dist[order[-1]])
        nxt = int(np.argmin(row))
        order.append(nxt)
        visited[nxt] = True
    return order


def two_opt(order: List[int], dist: np.ndarray, min_gain: float = 1e-12) -> List[int]:
    """First-improvement 2-opt: reverse a segment whenever that shortens the tour by more than ``min_gain``."""
    tour = list(order)
    n = len(tour)
    if n < 4:
        return tour
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            a, b = tour[i], tour[i + 1]
            for j in range(i + 2, n if i > 0 else n - 1):
                c, d = tour[j], tour[(j + 1) % n]
                gain = dist[a, b] + dist[c, d] - dist[a, c] - dist[b, d]
                if gain > min_gain:
                    tour[i + 1 : j + 1] = reversed(tour[i + 1 : j + 1])
                    improved = True
                    break
            if improved:
                break
    return tour


def solve_tsp(xy: np.ndarray, exact_limit: int = 12, min_gain: float = 1e-12) -> Tuple[float, List[int]]:
    """Shortest closed tour found; exact up to ``exact_limit`` cities. A single point is a zero-length tour."""
    n = len(xy)
    if n == 0:
        return 0.0, []
    dist = distance_matrix(np.asarray(xy, dtype=float))
    if n <= exact_limit:
        return held_karp(dist)
    order = two_opt(nearest_neighbor(dist), dist, min_gain)
    length = tour_length(order, dist)
    logger.debug("tsp_heuristic", cities=n, length=length)
    return length, order
