import argparse
import sys

from diskcover.models.solution import SolutionDocument
from diskcover.resources.common import add_instance_overrides, add_solve_options, apply_overrides, get_solver, solve_options
from diskcover.services.solver_service import ALGORITHMS
from diskcover.utils import svg
from diskcover.utils.io import load_instance, save_solution, write_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="run one algorithm on one instance")
    parser.add_argument("--input", required=True, help="instance file")
    parser.add_argument("--alg", required=True, choices=ALGORITHMS, help="algorithm id")
    parser.add_argument("--output", default=None, help="solution file (stdout when omitted)")
    parser.add_argument("--report", default=None, help="CSV report to append a row to")
    parser.add_argument("--svg", default=None, help="SVG drawing of the solution")
    parser.add_argument("--with-oracle", dest="with_oracle", action="store_true", help="also run the reference algorithm")
    add_instance_overrides(parser)
    add_solve_options(parser)
    parser.set_defaults(handler=run_command)


def run_command(args: argparse.Namespace, state) -> int:
    instance = apply_overrides(load_instance(args.input), args)
    options = solve_options(args, state)
    measured = get_solver(state).measure(args.alg, instance, options, with_oracle=args.with_oracle)
    solved = measured.solved
    if args.output:
        doc = save_solution(args.output, solved.algorithm, solved.result, solved.metric, solved.figures)
    else:
        doc = SolutionDocument.from_result(solved.algorithm, solved.result, solved.metric, solved.figures)
        sys.stdout.write(doc.model_dump_json(indent=2, exclude_none=True) + "\n")
    if args.report:
        write_report(args.report, [measured.row], append=True)
    if args.svg:
        svg.render(args.svg, instance, doc)
    return 0
