"""
Morita commands for volut.

List the small F2-algebras and their bimodules, form balanced tensor products,
check closedness and search for degenerate hermitian composites.
"""

import argparse
import logging

from volut.commands.common import EXIT_OK, EXIT_VIOLATION, emit, emit_report
from volut.config import VolutConfig
from volut.errors import StructuralError
from volut.profmor import morita
from volut.serialize import algebra_to_dict, bimodule_to_dict, load_structure

logger = logging.getLogger(__name__)


ALIASES = {"f2": 0, "f2xf2": 1, "dual": 2, "f4": 3}


def _algebra(name: str) -> morita.FinAlgebra:
    algebras = morita.f2_algebras(2)
    if name.lower() in ALIASES:
        return algebras[ALIASES[name.lower()]]
    for a in algebras:
        if a.name == name:
            return a
    structure = load_structure(name)
    if not isinstance(structure, morita.FinAlgebra):
        raise StructuralError(f"{name} is neither a bundled algebra nor an algebra document")
    return structure


def _bimodule(path: str) -> morita.Bimodule:
    structure = load_structure(path)
    if not isinstance(structure, morita.Bimodule):
        raise StructuralError(f"{path} does not hold a bimodule")
    return structure


def register_commands(cli):
    """Register the morita command and its actions.

    Args:
        cli: The VolutCLI instance
    """

    def run(args: argparse.Namespace, config: VolutConfig) -> int:
        """Dispatch on the morita action.

        Args:
            args: Parsed arguments
            config: The resolved configuration
        """
        if args.action == "algebras":
            algebras = morita.f2_algebras(args.max_dim)
            emit(
                args,
                {"type": "algebra-list", "algebras": [algebra_to_dict(a) for a in algebras]},
                "\n".join(f"{a.name} (dim {a.dim})" for a in algebras),
            )
            return EXIT_OK
        if args.action == "bimodules":
            if len(args.args) != 2:
                raise StructuralError("morita bimodules takes two algebras")
            a, b = (_algebra(x) for x in args.args)
            found = morita.bimodules(a, b, args.max_dim)
            emit(
                args,
                {"type": "bimodule-list", "bimodules": [bimodule_to_dict(m) for m in found]},
                "\n".join(repr(m) for m in found),
            )
            return EXIT_OK
        if args.action == "tensor":
            if len(args.args) != 2:
                raise StructuralError("morita tensor takes two bimodule files")
            m, n = (_bimodule(x) for x in args.args)
            emit(args, bimodule_to_dict(morita.balanced_tensor(m, n)))
            return EXIT_OK
        if args.action == "closedness":
            if len(args.args) != 3:
                raise StructuralError("morita closedness takes the bimodule files M N P")
            m, n, p = (_bimodule(x) for x in args.args)
            report = morita.verify_morita_closedness(
                m.left_algebra, p.right_algebra, m.right_algebra, m, n, p, config=config
            )
            return emit_report(args, report)
        found = morita.herm_search(max_dim=args.max_dim, config=config)
        if found is None:
            emit(args, {"type": "herm-search", "found": False}, "no degenerate composite")
            return EXIT_VIOLATION
        emit(args, {"type": "herm-search", "found": True, **found.to_dict()}, str(found.to_dict()))
        return EXIT_OK

    sub = cli.command("morita", "bimodules over small F2-algebras", run)
    sub.add_argument("action", choices=["algebras", "bimodules", "tensor", "closedness", "herm-search"])
    sub.add_argument("args", nargs="*", help="algebra names or bimodule documents")
    sub.add_argument("--max-dim", type=int, default=2, help="dimension bound")
