"""
Profunctor commands for volut.

Compose saved profunctors, form internal homs, check the dual snake
identities and the local volutive structure on Prof(C, D).
"""

import argparse
import logging

from volut.commands.common import EXIT_OK, emit, emit_report, named_category, named_volutive
from volut.config import VolutConfig
from volut.errors import StructuralError
from volut.profmor import prof
from volut.serialize import load_structure, profunctor_to_dict
from volut.volutive import Kind, check_volutive

logger = logging.getLogger(__name__)


def _load_profunctor(path: str) -> prof.Profunctor:
    structure = load_structure(path)
    if not isinstance(structure, prof.Profunctor):
        raise StructuralError(f"{path} does not hold a profunctor")
    return structure


def _files(args: argparse.Namespace, count: int) -> list[str]:
    if len(args.files) != count:
        raise StructuralError(f"prof {args.action} takes {count} file(s), got {len(args.files)}")
    return args.files


def register_commands(cli):
    """Register the prof command and its actions.

    Args:
        cli: The VolutCLI instance
    """

    def run(args: argparse.Namespace, config: VolutConfig) -> int:
        """Dispatch on the prof action.

        Args:
            args: Parsed arguments
            config: The resolved configuration
        """
        if args.action == "compose":
            g, f = (_load_profunctor(p) for p in _files(args, 2))
            composite = prof.prof_compose(g, f)
            emit(args, profunctor_to_dict(composite, config))
            return EXIT_OK
        if args.action == "ihom":
            x, y = (_load_profunctor(p) for p in _files(args, 2))
            emit(args, profunctor_to_dict(prof.prof_internal_hom(x, y, config), config))
            return EXIT_OK
        if args.action == "check":
            return emit_report(args, prof.check_profunctor(_load_profunctor(_files(args, 1)[0]), config))
        if args.action == "zorro":
            return emit_report(args, prof.verify_prof_zorro(named_category(args.category), config))
        local = prof.prof_local_structure(
            named_volutive(args.source), named_volutive(args.target), args.max_size, config
        )
        logger.info(f"{local.volutive.name}: {len(local.category.objects)} profunctors")
        return emit_report(args, check_volutive(local.volutive, Kind.LAX, config))

    sub = cli.command("prof", "profunctor composition, duals and the local structure", run)
    sub.add_argument("action", choices=["compose", "ihom", "check", "zorro", "local"])
    sub.add_argument("files", nargs="*", help="profunctor documents: G F for compose, X Y for ihom")
    sub.add_argument("--category", default="arrow", help="category for zorro")
    sub.add_argument("--source", default="arrow", help="volutive source for local")
    sub.add_argument("--target", default="terminal", help="volutive target for local")
    sub.add_argument("--max-size", type=int, default=2, help="value-set bound for local")
