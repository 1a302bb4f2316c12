import math

import pytest
from pydantic import ValidationError

from diskcover.models.common import ParameterError, SchemaError, SizeLimitError, UsageError
from diskcover.models.document import InstanceDocument
from diskcover.models.geometry import L2, LINF, CostModel, Cover, Disk, Instance, Line, Metric, Point
from diskcover.models.line import LineInstance1D, LineSearchResult
from diskcover.models.report import ReportRow
from diskcover.models.solution import SolutionDocument
from diskcover.models.tour import CoveringTour, GridSpec


def test_point_reads_short_sequences():
    assert Point.model_validate([5.0]).as_tuple() == (5.0, 0.0)
    assert Point.model_validate([3, 4]).as_tuple() == (3.0, 4.0)
    with pytest.raises(ValidationError):
        Point.model_validate([1, 2, 3])


def test_point_rejects_non_finite():
    with pytest.raises(ValidationError):
        Point(x=math.nan, y=0.0)
    with pytest.raises(ValidationError):
        Point(x=0.0, y=math.inf)


def test_metric_parsing():
    assert Metric.parse("inf").is_inf
    assert Metric.parse(1).is_manhattan
    assert str(Metric.parse("2")) == "L2"
    assert Metric(p=math.inf).model_dump() == {"p": "inf"}
    with pytest.raises(ValidationError):
        Metric(p=0.5)


def test_cost_model_rejects_sublinear_alpha():
    with pytest.raises(ValidationError):
        CostModel(alpha=0.5)
    assert Cover.of([Disk(center=Point(x=0), radius=1.0), Disk(center=Point(x=3), radius=2.0)], CostModel(alpha=2)).cost == 5.0


def test_disk_apex_depends_on_metric():
    assert Disk(center=Point(x=1, y=0), radius=2).apex.as_tuple() == (1.0, 2.0)
    assert Disk(center=Point(x=1, y=0), radius=2, metric=LINF).apex.as_tuple() == (3.0, 2.0)


def test_cover_cost_must_recompute():
    disks = [Disk(center=Point(x=0), radius=1), Disk(center=Point(x=4), radius=2)]
    assert Cover.of(disks, 2.0).cost == 5.0
    with pytest.raises(ValidationError):
        Cover(disks=disks, cost=4.0, alpha=1.0)


def test_line_through_is_canonical():
    line = Line.through(Point(x=1, y=1), Point(x=0, y=0))
    assert line.direction[1] > 0
    assert line.offset(Point(x=2, y=2)) == pytest.approx(0.0)
    assert line.at(line.parameter(Point(x=3, y=3))).as_tuple() == pytest.approx((3.0, 3.0))
    with pytest.raises(ValueError):
        Line.through(Point(x=1, y=1), Point(x=1, y=1))
    with pytest.raises(ValidationError):
        Line(anchor=Point(x=0), direction=(1.0, 1.0))


def test_line_search_result_requires_centers_on_line():
    cover = Cover.of([Disk(center=Point(x=0, y=1), radius=1)])
    LineSearchResult(line=Line.horizontal(1.0), cover=cover)
    with pytest.raises(ValidationError):
        LineSearchResult(line=Line.horizontal(0.0), cover=cover)


def test_line_instance_sorts():
    inst = LineInstance1D(servers=[2, -1], clients=[3, 0, 1])
    assert inst.servers == [-1.0, 2.0]
    assert inst.clients == [0.0, 1.0, 3.0]


def test_instance_defaults_and_one_dimensionality():
    inst = Instance(clients=[Point(x=0, y=1)])
    assert inst.metric == L2 and inst.alpha == 1.0
    assert not inst.is_one_dimensional
    assert Instance(clients=[Point(x=0)], servers=[Point(x=1)]).is_one_dimensional
    with pytest.raises(ValidationError):
        Instance(clients=[])
    with pytest.raises(ValidationError):
        Instance(clients=[Point(x=0)], servers=[])


def test_instance_document_round_trip():
    doc = InstanceDocument.model_validate(
        {"metric": {"p": "inf"}, "alpha": 2, "clients": [[0, 1], [2]], "servers": [[1]], "tour_weight": 3}
    )
    inst = doc.to_instance()
    assert inst.metric.is_inf and inst.alpha == 2.0 and inst.cost_model.tour_weight == 3.0
    assert InstanceDocument.from_instance(inst) == doc


def test_instance_document_forbids_unknown_fields():
    with pytest.raises(ValidationError):
        InstanceDocument.model_validate({"clients": [[0, 0]], "colour": "red"})


def test_covering_tour_consistency():
    tour = [Point(x=0, y=0), Point(x=1, y=0), Point(x=1, y=1), Point(x=0, y=1)]
    disks = [Disk(center=p, radius=0.0) for p in tour]
    built = CoveringTour.build(tour, disks, tour_weight=1000.0)
    assert built.total_cost == pytest.approx(4.0)
    with pytest.raises(ValidationError):
        CoveringTour(tour=tour, disks=disks, tour_length=4.0, cover_cost=0.0, total_cost=5.0, tour_weight=1.0)
    with pytest.raises(ValidationError):
        CoveringTour.build(tour[:1], [Disk(center=Point(x=5, y=5), radius=1.0)], tour_weight=1.0)


def test_grid_nearest():
    assert GridSpec(spacing=1.0).nearest(Point(x=0.3, y=0.4)).as_tuple() == (0.0, 0.0)
    assert GridSpec(spacing=0.5, origin=Point(x=0.1, y=0.0)).nearest(Point(x=0.7, y=0.2)).as_tuple() == pytest.approx(
        (0.6, 0.0)
    )


def test_report_row_ratio():
    row = ReportRow.measured("gg-tight", "gg", cost=1.98, runtime_ms=0.1, oracle=1.0, seed=0)
    assert row.ratio == pytest.approx(1.98)
    assert ReportRow.measured("x", "dp-linear", cost=0.0, runtime_ms=0.0, oracle=0.0).ratio == 1.0
    assert math.isinf(ReportRow.measured("x", "sg", cost=1.0, runtime_ms=0.0, oracle=0.0).ratio)
    with pytest.raises(ValidationError):
        ReportRow(instance="x", algorithm="gg", cost=2.0, oracle=1.0, ratio=1.5, runtime_ms=0.0)


def test_solution_document_recomputes_cost():
    cover = Cover.of([Disk(center=Point(x=0), radius=1.0), Disk(center=Point(x=4), radius=1.0)])
    doc = SolutionDocument.from_result("dp-linear", cover)
    assert doc.kind == "cover" and doc.cost == 2.0
    assert Cover.of(doc.to_disks(), doc.alpha) == cover
    data = doc.model_dump()
    data["cost"] = 3.0
    with pytest.raises(ValidationError):
        SolutionDocument.model_validate(data)


def test_error_exit_codes():
    assert UsageError("x").exit_code == 2
    assert ParameterError("x").exit_code == 2
    assert SchemaError("x").exit_code == 3
    assert SizeLimitError("x", details={"limit": 1}).to_response().model_dump() == {
        "message": "x",
        "code": 4,
        "details": {"limit": 1},
    }
