import argparse
import sys

from diskcover.models.document import InstanceDocument
from diskcover.resources.common import add_instance_overrides, apply_overrides
from diskcover.services.generators import GENERATORS, generate
from diskcover.utils.io import parse_params, save_instance


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="generate an instance file")
    parser.add_argument("kind", choices=sorted(GENERATORS))
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="generator parameter")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--output", default=None, help="instance file (stdout when omitted)")
    add_instance_overrides(parser)
    parser.set_defaults(handler=gen_command)


def gen_command(args: argparse.Namespace, state) -> int:
    seed = args.seed if args.seed is not None else state.settings.seed
    instance = apply_overrides(generate(args.kind, parse_params(args.param), seed), args)
    if args.output:
        save_instance(args.output, instance)
        state.logger.info("instance_written", path=args.output, clients=len(instance.clients))
    else:
        sys.stdout.write(InstanceDocument.from_instance(instance).model_dump_json(indent=2, exclude_none=True) + "\n")
    return 0
