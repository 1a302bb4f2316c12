import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from diskcover.models.common import ParameterError, PreconditionError
from diskcover.models.geometry import L1, L2, LINF, CostModel, Cover, Disk, Line, Point
from diskcover.services.geometry_core import covers
from diskcover.services.line_cover import dp_linear, solve_superlinear
from diskcover.services.line_search import (
    any_line_constant,
    any_line_ptas,
    cover_on_line,
    fptas_horizontal,
    fptas_line_count,
    horizontal_constant,
    radicals_cost,
    reanchor_cover,
    sweep_oracle,
)

RADICALS = [(3.0, 4.0), (-3.0, -2.0), (102.0, 2.0), (98.0, -2.0), (200.0, -2.0)]


def listed_radicals_cost(y):
    return math.sqrt(2 * (y - 1) ** 2 + 18) + math.sqrt(2 * y * y + 8) + (2 + y)


def test_fptas_line_count():
    assert fptas_line_count(5, 0.1, 1.0) == 100
    assert fptas_line_count(5, 0.1, 2.0) == math.ceil(2 * 8 * 5 / 0.1)


def test_fptas_finds_radicals_minimum(radicals_above):
    result = fptas_horizontal(radicals_above, epsilon=1e-3)
    assert result.cost == pytest.approx(8.3327196, abs=1e-3)
    assert result.line.anchor.y == pytest.approx(1.4024709, abs=0.01)
    assert covers(result.cover.disks, radicals_above)


def test_radicals_closed_form_matches_line_cover(radicals_above):
    for y in (-1.5, 0.0, 1.0, 1.4024709, 2.0):
        shifted = [(x, py - y) for x, py in radicals_above]
        assert dp_linear(shifted).cost == pytest.approx(radicals_cost(y), abs=1e-9)
    assert radicals_cost(1.4024709) == pytest.approx(8.3327196, abs=1e-4)


def test_fptas_on_listed_radicals_clients():
    best = minimize_scalar(listed_radicals_cost, bounds=(-2.0, 2.0), method="bounded")
    result = fptas_horizontal(RADICALS, epsilon=1e-3)
    assert result.cost == pytest.approx(best.fun, abs=1e-3)
    assert result.cost <= (1 + 1e-3) * best.fun + 1e-9


def test_fptas_single_height_uses_that_line():
    result = fptas_horizontal([(0, 2), (5, 2)])
    assert result.line.anchor.y == 2.0
    assert result.cost == 0.0


def test_fptas_rejects_bad_epsilon():
    with pytest.raises(ParameterError):
        fptas_horizontal([(0, 1)], epsilon=0.0)


def test_fptas_refines_with_nested_grids(rng):
    xy = np.column_stack([rng.uniform(0, 10, 5), rng.uniform(-3, 3, 5)])
    costs = [fptas_horizontal(xy, epsilon=eps).cost for eps in (0.4, 0.2, 0.1, 0.05)]
    for coarse, fine in zip(costs, costs[1:]):
        assert fine <= coarse + 1e-9


def test_horizontal_constant_is_within_fptas_guarantee(rng):
    for _ in range(5):
        xy = np.column_stack([rng.uniform(0, 10, 6), rng.uniform(-3, 3, 6)])
        fast = horizontal_constant(xy)
        assert covers(fast.cover.disks, xy)
        assert fptas_horizontal(xy, epsilon=0.1).cost <= 1.1 * fast.cost + 1e-9


def test_cover_on_line_rotated_matches_horizontal(rng):
    xy = np.column_stack([rng.uniform(0, 10, 8), rng.uniform(-3, 3, 8)])
    c, s = math.cos(0.7), math.sin(0.7)
    rotated = xy @ np.array([[c, s], [-s, c]])
    line = Line(anchor=Point(x=0.0, y=0.0), direction=(c, s))
    cover = cover_on_line(rotated, line)
    assert cover.cost == pytest.approx(dp_linear(xy).cost, rel=1e-9)
    assert covers(cover.disks, rotated)


def test_cover_on_line_needs_euclidean_for_rotated_lines():
    line = Line(anchor=Point(x=0.0, y=0.0), direction=(math.sqrt(0.5), math.sqrt(0.5)))
    with pytest.raises(ParameterError):
        cover_on_line([(1, 0)], line, L1)
    assert cover_on_line([(0, 1)], Line.horizontal(0.0), LINF).cost == pytest.approx(1.0)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_reanchor_doubles_radii_and_keeps_coverage(rng, alpha):
    f = CostModel(alpha=alpha)
    for _ in range(20):
        xy = np.column_stack([rng.uniform(-5, 5, 7), rng.uniform(-3, 3, 7)])
        line = Line.horizontal(0.0)
        cover = cover_on_line(xy, line, L2, f)
        pivot = (float(rng.uniform(-5, 5)), 0.0)
        new_line, moved = reanchor_cover(cover, pivot, xy, f, line)
        assert covers(moved.disks, xy)
        assert moved.cost == pytest.approx(2.0 ** alpha * cover.cost, rel=1e-9)
        assert min(abs(new_line.offset(Point(x=x, y=y))) for x, y in xy) <= 1e-9
        for d in moved.disks:
            assert abs(new_line.offset(d.center)) <= 1e-9


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_reanchor_twice_reaches_a_line_through_two_clients(rng, alpha):
    f = CostModel(alpha=alpha)
    for _ in range(500):
        xy = np.column_stack([rng.uniform(-5, 5, 7), rng.uniform(-3, 3, 7)])
        line = Line.horizontal(0.0)
        cover = cover_on_line(xy, line, L2, f)
        first_line, first = reanchor_cover(cover, (float(rng.uniform(-5, 5)), 0.0), xy, f, line)
        on_first = min(range(len(xy)), key=lambda i: abs(first_line.offset(Point(x=xy[i, 0], y=xy[i, 1]))))
        pivot = (float(xy[on_first, 0]), float(xy[on_first, 1]))
        second_line, second = reanchor_cover(first, pivot, xy, f, first_line)
        assert covers(second.disks, xy)
        assert second.cost == pytest.approx(4.0 ** alpha * cover.cost, rel=1e-9)
        on_second = [i for i in range(len(xy)) if abs(second_line.offset(Point(x=xy[i, 0], y=xy[i, 1]))) <= 1e-9]
        assert len(on_second) >= 2


def test_reanchor_needs_a_line_when_disks_sit_on_the_pivot():
    cover = Cover.of([Disk(center=Point(x=1.0, y=0.0), radius=1.0)])
    with pytest.raises(ParameterError):
        reanchor_cover(cover, (1.0, 0.0), [(1.0, 1.0)])
    line, moved = reanchor_cover(cover, (1.0, 0.0), [(1.0, 1.0)], line=Line.horizontal(0.0))
    assert covers(moved.disks, [(1.0, 1.0)])


def test_reanchor_requires_euclidean_disks():
    cover = cover_on_line([(0, 1)], Line.horizontal(0.0), LINF)
    with pytest.raises(ParameterError):
        reanchor_cover(cover, (0.0, 0.0), [(0, 1)])


def test_any_line_constant_on_collinear_clients():
    result = any_line_constant([(0, 0), (1, 1), (2, 2), (5, 5)])
    assert result.cost == pytest.approx(0.0, abs=1e-9)
    assert any_line_constant([(3, 3), (3, 3)]).cost == 0.0


def test_any_line_constant_needs_euclidean():
    with pytest.raises(ParameterError):
        any_line_constant([(0, 0), (1, 2)], LINF)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_any_line_constant_against_sweep(rng, alpha):
    f = CostModel(alpha=alpha)
    for _ in range(5):
        xy = rng.uniform(0, 10, size=(6, 2))
        constant = any_line_constant(xy, L2, f)
        swept = sweep_oracle(xy, f, resolution=0.05)
        assert covers(constant.cover.disks, xy)
        assert constant.cost <= 4.0 ** alpha * swept.cost + 1e-9


def test_any_line_constant_fast_mode_is_never_better(rng):
    for _ in range(50):
        xy = rng.uniform(0, 10, size=(int(rng.integers(2, 9)), 2))
        fast = any_line_constant(xy, fast=True)
        assert covers(fast.cover.disks, xy)
        assert any_line_constant(xy).cost <= fast.cost + 1e-9


def plane_clients(rng, n):
    return rng.uniform(0, 10, size=(n, 2)) * np.array([1.0, rng.uniform(0.2, 1.0)])


def check_against_sweep(xy, epsilon):
    swept = sweep_oracle(xy, resolution=0.02).cost
    ptas = any_line_ptas(xy, epsilon=epsilon)
    constant = any_line_constant(xy)
    assert covers(ptas.cover.disks, xy)
    assert ptas.cost <= (1.0 + epsilon) * swept + 1e-9
    assert ptas.cost <= constant.cost + 1e-9
    assert constant.cost <= 4.0 * swept + 1e-9


def test_ptas_against_sweep(rng):
    for _ in range(6):
        check_against_sweep(plane_clients(rng, int(rng.integers(3, 6))), epsilon=1.0)


@pytest.mark.slow
def test_ptas_against_sweep_many_instances(rng):
    for _ in range(100):
        check_against_sweep(plane_clients(rng, int(rng.integers(3, 11))), epsilon=0.5)


def rotate(xy, angle):
    c, s = math.cos(angle), math.sin(angle)
    return xy @ np.array([[c, s], [-s, c]])


def test_any_line_results_are_rotation_invariant(rng):
    for _ in range(5):
        xy = rng.uniform(0, 10, size=(6, 2))
        turned = rotate(xy, 0.7)
        assert any_line_constant(turned).cost == pytest.approx(any_line_constant(xy).cost, rel=1e-6, abs=1e-9)
        assert any_line_ptas(turned, epsilon=1.0).cost == pytest.approx(
            any_line_ptas(xy, epsilon=1.0).cost, rel=1e-6, abs=1e-9
        )


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_fptas_against_finer_horizontal_sweep(rng, alpha):
    epsilon = 0.5
    for _ in range(3):
        xy = np.column_stack([rng.uniform(0, 10, 4), rng.uniform(-3, 3, 4)])
        lo, hi = float(xy[:, 1].min()), float(xy[:, 1].max())
        ys = np.linspace(lo, hi, 10 * fptas_line_count(len(xy), epsilon, alpha) + 1)
        finest = min(solve_superlinear(xy - np.array([0.0, y]), L2, alpha).cost for y in ys)
        result = fptas_horizontal(xy, L2, CostModel(alpha=alpha), epsilon)
        assert result.cost <= (1.0 + epsilon) * finest + 1e-9


def test_ptas_on_collinear_clients_is_free():
    assert any_line_ptas([(0, 0), (1, 2), (2, 4)]).cost == pytest.approx(0.0, abs=1e-9)


def test_ptas_preconditions():
    with pytest.raises(PreconditionError):
        any_line_ptas([(0, 0), (1, 1), (0, 1)], CostModel(alpha=2))
    with pytest.raises(ParameterError):
        any_line_ptas([(0, 0), (1, 1), (0, 1)], epsilon=-1.0)


def test_sweep_oracle_rejects_bad_resolution():
    with pytest.raises(ParameterError):
        sweep_oracle([(0, 0), (1, 1)], resolution=0.0)
