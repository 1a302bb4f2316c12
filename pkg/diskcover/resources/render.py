import argparse

from diskcover.utils import svg
from diskcover.utils.io import load_instance, load_solution


def register(subparsers) -> None:
    parser = subparsers.add_parser("render", help="draw an instance and optionally a solution as SVG")
    parser.add_argument("--input", required=True, help="instance file")
    parser.add_argument("--solution", default=None, help="solution file; checked against the instance")
    parser.add_argument("--svg", required=True, help="output SVG file")
    parser.set_defaults(handler=render_command)


def render_command(args: argparse.Namespace, state) -> int:
    instance = load_instance(args.input)
    solution = load_solution(args.solution, instance) if args.solution else None
    svg.render(args.svg, instance, solution)
    state.logger.info("svg_written", path=args.svg, disks=len(solution.disks) if solution else 0)
    return 0
