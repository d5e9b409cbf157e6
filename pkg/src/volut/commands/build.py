"""
Build commands for volut.

``volut build`` constructs a bundled instance and writes it as a JSON document.
"""

import argparse
import logging

from volut.closedmon import build_lax_volutive, build_volutive_dualizing
from volut.commands.common import EXIT_OK, emit
from volut.config import VolutConfig
from volut.errors import StructuralError
from volut.instances.fdvect import build_fdvect
from volut.instances.finmod import build_finmod, load_star_ring
from volut.instances.finset import build_finset
from volut.instances.quantale import build_quantale
from volut.serialize import category_to_dict, closed_to_dict, volutive_to_dict
from volut.volutive import terminal_volutive, walking_arrow_volutive

logger = logging.getLogger(__name__)

INSTANCES = ["fdvect", "finset", "quantale", "finmod", "terminal", "arrow"]


def build_instance(args: argparse.Namespace, config: VolutConfig) -> dict:
    """The requested document for one instance.

    Raises:
        StructuralError: if the instance has no structure of the requested kind
    """
    closed = None
    if args.instance == "fdvect":
        _, closed, v = build_fdvect(args.q, args.max_dim, config)
    elif args.instance == "finset":
        _, closed = build_finset(args.max_size, config)
        v = build_lax_volutive(closed, config)
    elif args.instance == "quantale":
        _, closed = build_quantale(args.preset, config)
        if args.dualizing is not None:
            v = build_volutive_dualizing(closed, args.dualizing, config)
        else:
            v = build_lax_volutive(closed, config)
    elif args.instance == "finmod":
        _, v = build_finmod(load_star_ring(args.ring), args.size_cap, config, skeletal=not args.all)
    elif args.instance == "terminal":
        v = terminal_volutive()
    else:
        v = walking_arrow_volutive()
    if args.structure == "closed":
        if closed is None:
            raise StructuralError(f"{args.instance} has no closed structure")
        return closed_to_dict(closed, config)
    if args.structure == "category":
        return category_to_dict(v.base, config)
    return volutive_to_dict(v, config)


def register_commands(cli):
    """Register the build command.

    Args:
        cli: The VolutCLI instance
    """

    def build(args: argparse.Namespace, config: VolutConfig) -> int:
        """Build an instance and write it out.

        Args:
            args: Parsed arguments
            config: The resolved configuration
        """
        document = build_instance(args, config)
        logger.info(f"built {args.instance} as a {document['type']} document")
        emit(args, document)
        return EXIT_OK

    sub = cli.command("build", "build a bundled instance and write it as JSON", build)
    sub.add_argument("instance", choices=INSTANCES)
    sub.add_argument("--structure", choices=["volutive", "closed", "category"], default="volutive")
    sub.add_argument("--q", type=int, default=2, help="field size for fdvect (2, 3 or 4)")
    sub.add_argument("--max-dim", type=int, default=2, help="largest dimension for fdvect")
    sub.add_argument("--max-size", type=int, default=3, help="largest set for finset")
    sub.add_argument("--preset", default="lukasiewicz3", help="quantale preset name")
    sub.add_argument("--dualizing", help="dualizing object for a strict quantale structure")
    sub.add_argument("--ring", default="z4", help="star ring preset or JSON file for finmod")
    sub.add_argument("--size-cap", type=int, default=8, help="largest module for finmod")
    sub.add_argument("--all", action="store_true", help="keep isomorphic modules apart")
