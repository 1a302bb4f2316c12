import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest
import structlog

from diskcover.main import main
from diskcover.models.common import ParameterError, SchemaError, UsageError
from diskcover.models.geometry import Instance, Point
from diskcover.models.report import REPORT_COLUMNS, ReportRow
from diskcover.services.generators import generate
from diskcover.services.geometry_core import covers
from diskcover.services.solver_service import SolveOptions, SolverService
from diskcover.utils.io import load_instance, load_solution, parse_params, read_report, save_instance, write_report
from diskcover.utils.settings import Settings

DATA = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture
def solver():
    return SolverService(structlog.get_logger("test"), Settings())


def test_generators_are_deterministic():
    a = generate("uniform-square", {"n": 5}, seed=3)
    assert a == generate("uniform-square", {"n": 5}, seed=3)
    assert a != generate("uniform-square", {"n": 5}, seed=4)
    assert a.name == "uniform-square-3"


def test_generator_families():
    sgg = generate("sgg-area", {"n": 3, "epsilon": 0.1})
    assert [p.as_tuple() for p in sgg.clients] == pytest.approx([(0.0, 1.0), (1.1, 1.0), (2.2, 1.0)])
    tight = generate("gg-tight", {"epsilon": 0.01})
    assert tight.is_one_dimensional and len(tight.servers) == 3
    assert len(generate("collinear", {"n": 7, "m": 3}).clients) == 7


def test_generator_errors():
    with pytest.raises(UsageError):
        generate("spiral")
    with pytest.raises(ParameterError):
        generate("uniform-square", {"n": 0})


def test_parse_params():
    assert parse_params(["n=5", "epsilon=0.1", "variant=above"]) == {"n": 5, "epsilon": 0.1, "variant": "above"}
    with pytest.raises(UsageError):
        parse_params(["oops"])


def test_instance_round_trip(tmp_path):
    inst = generate("circle", {"n": 6}, seed=1)
    path = tmp_path / "circle.json"
    save_instance(path, inst)
    assert load_instance(path) == inst


def test_load_instance_errors(tmp_path):
    with pytest.raises(UsageError):
        load_instance(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"clients": []}))
    with pytest.raises(SchemaError) as info:
        load_instance(bad)
    assert "clients" in info.value.message
    unnamed = tmp_path / "plain.json"
    unnamed.write_text(json.dumps({"clients": [[0, 1]]}))
    assert load_instance(unnamed).name == "plain"


def test_load_solution_rejects_uncovering_disks(tmp_path):
    path = tmp_path / "sol.json"
    path.write_text(json.dumps({"algorithm": "dp-linear", "cost": 1.0, "disks": [{"center": [0, 0], "radius": 1.0}]}))
    load_solution(path, Instance(clients=[Point(x=0, y=1)]))
    with pytest.raises(SchemaError):
        load_solution(path, Instance(clients=[Point(x=5, y=5)]))


def test_report_writing(tmp_path):
    rows = [
        ReportRow.measured("b", "gg", cost=2.0, runtime_ms=0.5, oracle=1.0, seed=0),
        ReportRow.measured("a", "sg", cost=3.0, runtime_ms=0.25),
    ]
    path = tmp_path / "report.csv"
    write_report(path, rows)
    written = read_report(path)
    assert [r["instance"] for r in written] == ["a", "b"]
    assert written[0]["oracle"] == "" and written[1]["ratio"] == "2.0"
    write_report(path, rows[:1], append=True)
    assert len(read_report(path)) == 3
    assert path.read_text().splitlines()[0] == ",".join(REPORT_COLUMNS)


def test_solver_measures_against_oracle(solver):
    inst = load_instance(DATA / "gg-tight.json")
    measured = solver.measure("gg", inst, SolveOptions(), with_oracle=True)
    assert measured.row.cost == pytest.approx(1.98)
    assert measured.row.oracle == pytest.approx(1.0)
    assert measured.row.ratio == pytest.approx(1.98)


def test_solver_checks_instance_fits(solver):
    plane = Instance(clients=[Point(x=0, y=1)])
    with pytest.raises(UsageError):
        solver.solve("gg", plane, SolveOptions())
    with pytest.raises(UsageError):
        solver.solve("mcct-heur", plane, SolveOptions())
    with pytest.raises(UsageError):
        solver.solve("nope", plane, SolveOptions())


def test_solver_runs_every_plane_algorithm(solver):
    inst = generate("uniform-square", {"n": 6}, seed=2)
    inst = inst.model_copy(update={"cost_model": inst.cost_model.model_copy(update={"tour_weight": 2.0})})
    options = SolveOptions(resolution=0.1, epsilon=0.5)
    for alg in ("dp-linear", "dp-super", "dp-squares", "sg", "sgg", "fptas-h", "h-const", "line-const",
                "mcct-circum", "mcct-heur", "oracle-line", "oracle-squares", "sweep-oracle"):
        solved = solver.solve(alg, inst, options)
        assert solved.cost >= 0.0
        assert covers(solved.result.disks if hasattr(solved.result, "disks") else solved.result.cover.disks, inst.clients)


def test_cli_gen_and_run(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    assert main(["gen", "uniform-square", "--param", "n=6", "--seed", "1", "--output", str(inst)]) == 0
    out1, out2 = tmp_path / "s1.json", tmp_path / "s2.json"
    for out in (out1, out2):
        assert main(["run", "--input", str(inst), "--alg", "dp-linear", "--output", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert load_solution(out1, load_instance(inst)).algorithm == "dp-linear"


def test_cli_gen_to_stdout(capsys):
    assert main(["gen", "radicals", "--param", "variant=above"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["clients"][-1] == [200.0, 2.0]


def test_cli_run_with_report_and_svg(tmp_path, capsys):
    report, drawing = tmp_path / "r.csv", tmp_path / "s.svg"
    args = ["run", "--input", str(DATA / "gg-tight.json"), "--alg", "gg", "--with-oracle"]
    assert main(args + ["--report", str(report), "--svg", str(drawing)]) == 0
    (row,) = read_report(report)
    assert row["algorithm"] == "gg" and float(row["ratio"]) == pytest.approx(1.98)
    assert ET.parse(drawing).getroot().tag.endswith("svg")
    assert json.loads(capsys.readouterr().out)["cost"] == pytest.approx(1.98)


def test_cli_exit_codes(tmp_path, capsys):
    plane = tmp_path / "plane.json"
    assert main(["gen", "uniform-square", "--param", "n=13", "--output", str(plane)]) == 0
    assert main(["run", "--input", str(plane), "--alg", "gg"]) == 2
    assert main(["run", "--input", str(plane), "--alg", "oracle-line"]) == 4
    assert main(["run", "--input", str(tmp_path / "missing.json"), "--alg", "gg"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"clients": [[0, 1]], "alpha": 0.5}))
    assert main(["run", "--input", str(bad), "--alg", "dp-linear"]) == 3
    assert main(["run", "--input", str(plane), "--alg", "dp-linear", "--epsilon", "-1"]) == 2
    err = capsys.readouterr().err
    assert '"error"' in err
    with pytest.raises(SystemExit) as info:
        main(["run", "--input", str(plane), "--alg", "not-an-algorithm"])
    assert info.value.code == 2


def test_cli_render(tmp_path):
    sol = tmp_path / "sol.json"
    drawing = tmp_path / "out.svg"
    radicals = str(DATA / "radicals.json")
    assert main(["run", "--input", radicals, "--alg", "fptas-h", "--output", str(sol)]) == 0
    assert main(["render", "--input", radicals, "--solution", str(sol), "--svg", str(drawing)]) == 0
    assert drawing.stat().st_size > 0


def test_cli_bench(tmp_path, capsys):
    report = tmp_path / "bench.csv"
    args = ["bench", "--gen", "collinear", "--count", "3", "--param", "n=6", "--param", "m=4"]
    assert main(args + ["--alg", "cc,gg", "--alg", "exact1d", "--with-oracle", "--report", str(report)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["cc"]["runs"] == 3
    assert summary["cc"]["worst_ratio"] <= 4.0 + 1e-9
    assert summary["gg"]["worst_ratio"] <= 2.0 + 1e-9
    assert len(read_report(report)) == 9


def test_cli_bench_skips_unfit_cells(capsys):
    assert main(["bench", "--gen", "uniform-square", "--count", "2", "--alg", "gg,dp-linear"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["gg"]["runs"] == 0 and summary["dp-linear"]["runs"] == 2


def test_cli_reports_square_figures(tmp_path, capsys):
    inst = tmp_path / "sgg.json"
    assert main(["gen", "sgg-area", "--param", "n=3", "--param", "epsilon=0.1", "--output", str(inst)]) == 0
    assert main(["run", "--input", str(inst), "--alg", "sgg"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["edge_length"] == pytest.approx(4.1)
    assert doc["area"] == pytest.approx(1.0 * 4.0 + 1.05 ** 2 * 4.0)
    assert doc["area_ratio"] == pytest.approx(doc["area"] / 12.0)
    assert main(["run", "--input", str(inst), "--alg", "dp-linear"]) == 0
    assert "area_ratio" not in json.loads(capsys.readouterr().out)
    args = ["bench", "--gen", "sgg-area", "--count", "2", "--param", "n=6", "--alg", "sgg,dp-linear"]
    assert main(args) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["sgg"]["worst_area_ratio"] > 0.0
    assert "worst_area_ratio" not in summary["dp-linear"]
