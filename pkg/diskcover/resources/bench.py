import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

from diskcover.models.common import DiskCoverError, UsageError
from diskcover.models.geometry import Instance
from diskcover.models.report import ExperimentReport
from diskcover.resources.common import add_instance_overrides, add_solve_options, apply_overrides, get_solver, solve_options
from diskcover.services.generators import GENERATORS, generate
from diskcover.services.solver_service import ALGORITHMS, Measured, SolveOptions
from diskcover.utils.io import load_instance, parse_params, write_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="run algorithms over many instances and report ratios")
    parser.add_argument("--input", nargs="+", default=[], help="instance files")
    parser.add_argument("--gen", default=None, choices=sorted(GENERATORS), help="generate instances instead")
    parser.add_argument("--count", type=int, default=10, help="generated instances (seeds seed .. seed+count-1)")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--alg", action="append", required=True, help="algorithm id; repeat or comma-separate")
    parser.add_argument("--with-oracle", dest="with_oracle", action="store_true")
    parser.add_argument("--report", default=None, help="CSV report file (rewritten)")
    parser.add_argument("--workers", type=int, default=None)
    add_instance_overrides(parser)
    add_solve_options(parser)
    parser.set_defaults(handler=bench_command)


def _algorithms(values: List[str]) -> List[str]:
    algs = [a.strip() for v in values for a in v.split(",") if a.strip()]
    unknown = [a for a in algs if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithm(s): {', '.join(unknown)}", details={"known": list(ALGORITHMS)})
    return algs


def _instances(args: argparse.Namespace, seed: int) -> List[Tuple[Instance, int]]:
    if args.gen and args.input:
        raise UsageError("use either --input or --gen, not both")
    if args.gen:
        params = parse_params(args.param)
        return [(apply_overrides(generate(args.gen, params, seed + k), args), seed + k) for k in range(args.count)]
    if not args.input:
        raise UsageError("bench needs --input files or --gen")
    return [(apply_overrides(load_instance(p), args), seed) for p in args.input]


def bench_command(args: argparse.Namespace, state) -> int:
    solver = get_solver(state)
    base = solve_options(args, state)
    algorithms = _algorithms(args.alg)
    cells = [(inst, s, alg) for inst, s in _instances(args, base.seed) for alg in algorithms]
    workers = args.workers or state.settings.bench_workers

    def evaluate(cell) -> Optional[Measured]:
        inst, s, alg = cell
        options = SolveOptions(**{**base.model_dump(), "seed": s})
        try:
            return solver.measure(alg, inst, options, with_oracle=args.with_oracle)
        except DiskCoverError as exc:
            state.logger.warning("cell_skipped", instance=inst.name, algorithm=alg, error=exc.message)
            return None

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        measured = [m for m in pool.map(evaluate, cells) if m is not None]
    report = ExperimentReport(rows=[m.row for m in measured])
    if args.report:
        write_report(args.report, report.rows)

    summary: Dict[str, Dict[str, object]] = {}
    for alg in algorithms:
        mine = [r for r in report.rows if r.algorithm == alg]
        summary[alg] = {
            "runs": len(mine),
            "worst_ratio": report.worst_ratio(alg),
            "mean_runtime_ms": round(sum(r.runtime_ms for r in mine) / len(mine), 3) if mine else None,
        }
        area_ratios = [m.solved.figures["area_ratio"] for m in measured if m.row.algorithm == alg and m.solved.figures]
        if area_ratios:
            summary[alg]["worst_area_ratio"] = max(area_ratios)
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    state.logger.info("bench_finished", cells=len(cells), rows=len(report.rows), workers=workers)
    return 0
