import itertools
import math

import numpy as np
import pytest

from diskcover.models.common import ParameterError, PreconditionError, SizeLimitError
from diskcover.models.tour import GridSpec
from diskcover.services.geometry_core import covers
from diskcover.services.mcct import (
    circumcenter_solution,
    cluster_and_tour,
    covering_tour_lower_bound,
    exact_small_mcct,
    grid_points,
    snap_to_grid,
    tour_lower_bound_check,
)
from diskcover.services.tsp import distance_matrix, held_karp, nearest_neighbor, solve_tsp, tour_length, two_opt

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def brute_force_tsp(dist):
    n = len(dist)
    return min(tour_length([0] + list(rest), dist) for rest in itertools.permutations(range(1, n)))


def unit_circle(n):
    return [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]


def test_held_karp_square():
    length, order = held_karp(distance_matrix(np.array(SQUARE)))
    assert length == pytest.approx(4.0)
    assert order[0] == 0 and sorted(order) == [0, 1, 2, 3]


def test_held_karp_matches_brute_force(rng):
    for n in range(2, 8):
        dist = distance_matrix(rng.uniform(0, 10, size=(n, 2)))
        length, order = held_karp(dist)
        assert length == pytest.approx(brute_force_tsp(dist))
        assert tour_length(order, dist) == pytest.approx(length)


def test_heuristic_tour_is_a_permutation_and_no_shorter_than_optimal(rng):
    dist = distance_matrix(rng.uniform(0, 10, size=(9, 2)))
    order = two_opt(nearest_neighbor(dist), dist)
    assert sorted(order) == list(range(9))
    assert tour_length(order, dist) >= held_karp(dist)[0] - 1e-9


def test_solve_tsp_small_cases():
    assert solve_tsp(np.zeros((0, 2))) == (0.0, [])
    assert solve_tsp(np.array([[1.0, 2.0]])) == (0.0, [0])
    length, order = solve_tsp(np.array(SQUARE), exact_limit=2)
    assert length == pytest.approx(4.0) and sorted(order) == [0, 1, 2, 3]


def test_circle_clients_served_from_the_center():
    clients = unit_circle(8)
    tour = cluster_and_tour(clients, C=4.0)
    assert tour.total_cost == pytest.approx(4.0, abs=1e-9)
    assert circumcenter_solution(clients, 4.0).total_cost == pytest.approx(4.0)
    assert covering_tour_lower_bound(clients, 4.0) == pytest.approx(4.0)


def test_expensive_disks_give_a_plain_tour():
    tour = cluster_and_tour(SQUARE, C=1000.0)
    assert tour.total_cost == pytest.approx(4.0)
    assert tour.cover_cost == pytest.approx(0.0)


def test_cheap_disks_match_the_lower_bound(rng):
    for _ in range(10):
        xy = rng.uniform(0, 10, size=(7, 2))
        C = float(rng.uniform(0.1, 4.0))
        tour = cluster_and_tour(xy, C)
        assert tour.total_cost == pytest.approx(covering_tour_lower_bound(xy, C))


def test_heuristic_covers_and_respects_lower_bound(rng):
    for _ in range(10):
        xy = rng.uniform(0, 10, size=(10, 2))
        C = float(rng.uniform(0.5, 20.0))
        tour = cluster_and_tour(xy, C)
        assert covers(tour.disks, xy)
        assert tour.total_cost >= covering_tour_lower_bound(xy, C) - 1e-9


def test_heuristic_cost_is_monotone_in_weight(rng):
    xy = rng.uniform(0, 10, size=(8, 2))
    costs = [cluster_and_tour(xy, C).total_cost for C in (0.5, 2.0, 5.0, 10.0, 50.0)]
    for low, high in zip(costs, costs[1:]):
        assert low <= high + 1e-9


def test_heuristic_merges_duplicate_clients():
    tour = cluster_and_tour(SQUARE + SQUARE, C=1000.0)
    assert len(tour.tour) == 4


def test_weight_must_be_positive():
    with pytest.raises(ParameterError):
        cluster_and_tour(SQUARE, C=0.0)
    with pytest.raises(ParameterError):
        covering_tour_lower_bound(SQUARE, -1.0)


def test_tour_lower_bound_on_acute_triangles(rng):
    checked = 0
    while checked < 10_000:
        p, q, r = rng.uniform(-5, 5, size=(3, 2))
        try:
            perimeter, radius = tour_lower_bound_check(p, q, r)
        except PreconditionError:
            continue
        assert perimeter >= 4.0 * radius - 1e-9
        checked += 1


def test_tour_lower_bound_rejects_bad_triangles():
    with pytest.raises(PreconditionError):
        tour_lower_bound_check((0, 0), (1, 1), (2, 2))
    with pytest.raises(PreconditionError):
        tour_lower_bound_check((0, 0), (10, 0), (5, 1))
    perimeter, radius = tour_lower_bound_check((0, 0), (2, 0), (0, 2))
    assert radius == pytest.approx(math.sqrt(2.0))
    assert perimeter == pytest.approx(4.0 + 2.0 * math.sqrt(2.0))


def test_snap_keeps_coverage_and_cost(rng):
    xy = rng.uniform(0, 10, size=(8, 2))
    tour = cluster_and_tour(xy, C=5.0)
    snapped = snap_to_grid(tour, xy, epsilon=0.1)
    assert covers(snapped.disks, xy)
    assert snapped.total_cost <= 1.1 * tour.total_cost + 1e-9


def test_snap_onto_explicit_grid():
    grid = GridSpec(spacing=0.5)
    tour = cluster_and_tour([(0.1, 0.1), (3.2, 0.1), (3.2, 2.9)], C=1000.0)
    snapped = snap_to_grid(tour, [(0.1, 0.1), (3.2, 0.1), (3.2, 2.9)], epsilon=0.1, grid=grid)
    for v in snapped.tour:
        assert (v.x / 0.5) == pytest.approx(round(v.x / 0.5))
        assert (v.y / 0.5) == pytest.approx(round(v.y / 0.5))
    assert covers(snapped.disks, [(0.1, 0.1), (3.2, 0.1), (3.2, 2.9)])


def test_grid_points_cover_the_bounding_box():
    pts = grid_points([(0.1, 0.2), (0.9, 0.4)], GridSpec(spacing=0.5))
    assert pts.min(axis=0).tolist() == [0.0, 0.0]
    assert pts.max(axis=0).tolist() == [1.0, 0.5]
    assert len(pts) == 6


def test_exact_on_square_corners():
    tour = exact_small_mcct(SQUARE, C=1000.0, grid=GridSpec(spacing=1.0))
    assert tour.total_cost == pytest.approx(4.0)
    tour = exact_small_mcct(SQUARE, C=1.0, grid=GridSpec(spacing=0.5))
    assert tour.total_cost == pytest.approx(math.sqrt(0.5))


def test_exact_is_no_worse_than_snapped_heuristic(rng):
    grid = GridSpec(spacing=0.25)
    for _ in range(3):
        xy = rng.uniform(0, 1, size=(5, 2))
        for C in (1.0, 6.0):
            exact = exact_small_mcct(xy, C, grid)
            assert covers(exact.disks, xy)
            assert exact.total_cost >= covering_tour_lower_bound(xy, C) - 1e-9
            snapped = snap_to_grid(cluster_and_tour(xy, C), xy, epsilon=0.1, grid=grid)
            assert exact.total_cost <= snapped.total_cost + 1e-9


def test_exact_serves_circle_from_the_center():
    clients = unit_circle(8)
    exact = exact_small_mcct(clients, C=4.0, grid=GridSpec(spacing=0.5))
    assert exact.total_cost == pytest.approx(4.0)
    assert circumcenter_solution(clients, 4.0).total_cost == pytest.approx(exact.total_cost)


def test_heuristic_is_close_to_exact(rng):
    grid = GridSpec(spacing=0.25)
    for _ in range(5):
        xy = rng.uniform(0, 1, size=(5, 2))
        for C in (1.0, 6.0):
            exact = exact_small_mcct(xy, C, grid)
            assert cluster_and_tour(xy, C).total_cost <= 1.25 * exact.total_cost + 1e-9


@pytest.mark.parametrize("C", [1.0, 2.5, 4.0])
def test_exact_with_cheap_disks_is_one_enclosing_disk(rng, C):
    spacing = 0.25
    for _ in range(5):
        xy = rng.uniform(0, 1, size=(5, 2))
        r = circumcenter_solution(xy, 1.0).cover_cost
        exact = exact_small_mcct(xy, C, GridSpec(spacing=spacing))
        assert C * r - 1e-9 <= exact.total_cost <= C * (r + spacing / math.sqrt(2.0)) + 1e-9
    assert exact_small_mcct(SQUARE, C, GridSpec(spacing=0.5)).total_cost == pytest.approx(C * math.sqrt(0.5))


def test_snap_gives_up_after_max_halvings(rng):
    xy = rng.uniform(0, 10, size=(6, 2))
    tour = cluster_and_tour(xy, C=5.0)
    with pytest.raises(PreconditionError):
        snap_to_grid(tour, xy, epsilon=0.1, max_halvings=0)


def test_exact_refuses_large_search():
    with pytest.raises(SizeLimitError):
        exact_small_mcct(SQUARE, C=1.0, grid=GridSpec(spacing=0.01))
    with pytest.raises(SizeLimitError):
        exact_small_mcct([(k / 10, 0.0) for k in range(9)], C=1.0, grid=GridSpec(spacing=1.0))
