"""Flags and accessors shared by the subcommands."""
import argparse
from typing import Optional

from diskcover.models.common import UsageError
from diskcover.models.geometry import CostModel, Instance, Metric
from diskcover.services.solver_service import SolveOptions, SolverServiceProtocol


def get_solver(state) -> SolverServiceProtocol:
    return state.solver


def add_instance_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--metric", default=None, help="L_p metric: a number p >= 1 or 'inf'")
    parser.add_argument("--alpha", type=float, default=None, help="radius exponent (>= 1)")
    parser.add_argument("--tour-weight", dest="tour_weight", type=float, default=None, help="covering-tour weight C")


def add_solve_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=None, help="approximation parameter")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--fast", action="store_true", help="line-const: greedy squares per candidate line")
    parser.add_argument("--resolution", type=float, default=None, help="sweep-oracle step")
    parser.add_argument("--grid-spacing", dest="grid_spacing", type=float, default=None, help="mcct-exact grid spacing")


def parse_metric(value: Optional[str]) -> Optional[Metric]:
    if value is None:
        return None
    try:
        return Metric.parse(value)
    except ValueError as exc:
        raise UsageError(f"invalid --metric {value!r}", details={"field": "metric"}) from exc


def apply_overrides(instance: Instance, args: argparse.Namespace) -> Instance:
    """Command-line metric/alpha/tour-weight take precedence over the file."""
    update = {}
    metric = parse_metric(getattr(args, "metric", None))
    if metric is not None:
        update["metric"] = metric
    alpha = getattr(args, "alpha", None)
    weight = getattr(args, "tour_weight", None)
    if alpha is not None or weight is not None:
        try:
            update["cost_model"] = CostModel(
                alpha=instance.alpha if alpha is None else alpha,
                tour_weight=instance.cost_model.tour_weight if weight is None else weight,
            )
        except ValueError as exc:
            raise UsageError(f"invalid cost parameters: {exc}", details={"field": "alpha/tour_weight"}) from exc
    return instance.model_copy(update=update) if update else instance


def solve_options(args: argparse.Namespace, state) -> SolveOptions:
    settings = state.settings
    epsilon = args.epsilon if args.epsilon is not None else settings.default_epsilon
    if not epsilon > 0:
        raise UsageError(f"--epsilon must be positive, got {epsilon}", details={"field": "epsilon"})
    return SolveOptions(
        epsilon=epsilon,
        seed=args.seed if args.seed is not None else settings.seed,
        fast=args.fast,
        resolution=args.resolution,
        grid_spacing=args.grid_spacing,
    )
