"""
Linear relation commands for volut.
"""

import argparse
import logging
import random

from volut import linrel
from volut.commands.common import EXIT_OK, emit, emit_report
from volut.config import VolutConfig
from volut.errors import StructuralError
from volut.serialize import load_structure, relation_to_dict

logger = logging.getLogger(__name__)


def _relation(path: str) -> linrel.LinearRelation:
    structure = load_structure(path)
    if not isinstance(structure, linrel.LinearRelation):
        raise StructuralError(f"{path} does not hold a linear relation")
    return structure


def describe(v: linrel.LinearRelation) -> dict:
    return {
        "type": "relation-info",
        "relation": relation_to_dict(v),
        "dim": v.dim,
        "domain_dim": linrel.rel_domain(v).dim,
        "range_dim": linrel.rel_range(v).dim,
        "kernel_dim": linrel.rel_kernel(v).dim,
        "multivalued_dim": linrel.rel_multivalued_part(v).dim,
        "is_graph": linrel.rel_is_graph(v),
    }


def register_commands(cli):
    """Register the rel command and its actions.

    Args:
        cli: The VolutCLI instance
    """

    def run(args: argparse.Namespace, config: VolutConfig) -> int:
        """Dispatch on the rel action.

        Args:
            args: Parsed arguments
            config: The resolved configuration
        """
        needed = {
            "adjoint": 1,
            "reverse": 1,
            "info": 1,
            "compose": 2,
            "included": 2,
            "random": 0,
            "lemmas": 0,
        }
        if len(args.files) != needed[args.action]:
            raise StructuralError(f"rel {args.action} takes {needed[args.action]} file(s)")
        relations = [_relation(p) for p in args.files]
        if args.action == "random":
            rng = random.Random(config.seed)
            v = linrel.random_relation(rng, args.source, args.target, real=args.real)
            emit(args, relation_to_dict(v), str(v))
        elif args.action == "lemmas":
            return emit_report(args, linrel.check_lemmas(config, args.max_dim, args.real))
        elif args.action == "adjoint":
            v = linrel.rel_adjoint(relations[0])
            emit(args, relation_to_dict(v), str(v))
        elif args.action == "reverse":
            v = linrel.rel_reverse(relations[0])
            emit(args, relation_to_dict(v), str(v))
        elif args.action == "compose":
            # files are given as W V for W∘V
            v = linrel.rel_compose(relations[0], relations[1])
            emit(args, relation_to_dict(v), str(v))
        elif args.action == "included":
            inside = linrel.rel_included(relations[0], relations[1])
            emit(args, {"type": "inclusion", "included": inside}, str(inside))
        else:
            info = describe(relations[0])
            emit(args, info, "\n".join(f"{k}: {v}" for k, v in info.items() if k != "relation"))
        return EXIT_OK

    sub = cli.command("rel", "linear relations over the Gaussian rationals", run)
    sub.add_argument(
        "action", choices=["adjoint", "reverse", "compose", "included", "info", "random", "lemmas"]
    )
    sub.add_argument("files", nargs="*", help="relation documents")
    sub.add_argument("--source", type=int, default=2, help="source dimension for random")
    sub.add_argument("--target", type=int, default=2, help="target dimension for random")
    sub.add_argument("--real", action="store_true", help="random entries with zero imaginary part")
    sub.add_argument("--max-dim", type=int, default=4, help="dimension bound for lemmas")
