"""
Check commands for volut.

``volut check FILE`` runs one checker on a saved structure. The checker
defaults to the one matching the document's type.
"""

import argparse
import logging

from volut.closedmon import ClosedSymMonoidal, check_closed_structure
from volut.commands.common import emit_report
from volut.config import VolutConfig
from volut.equiv import (
    Pairing,
    adjunction_data_from_volutive,
    check_pairing,
    check_round_trip,
    verify_zorro,
)
from volut.errors import StructuralError, ValidationReport
from volut.fincat import FiniteCategory, check_category
from volut.linrel import LinearRelation, rel_adjoint, rel_reverse
from volut.profmor.morita import Bimodule, check_bimodule
from volut.profmor.prof import Profunctor, check_profunctor
from volut.serialize import load_structure
from volut.volutive import VolutiveStructure, check_dagger, check_volutive, dagger_category

logger = logging.getLogger(__name__)

STRUCTURES = [
    "category",
    "volutive",
    "dagger",
    "zorro",
    "roundtrip",
    "closed",
    "pairing",
    "profunctor",
    "relation",
    "bimodule",
]


def check_relation(v: LinearRelation) -> ValidationReport:
    report = ValidationReport(subject=f"relation {v.source.dim} → {v.target.dim}", checked=3)
    adj = rel_adjoint(v)
    if rel_adjoint(adj) != v:
        report.add("double-adjoint", "V†† ≠ V", str(v))
    if rel_adjoint(rel_adjoint(adj)) != adj:
        report.add("triple-adjoint", "V† ≠ V†††", str(adj))
    if rel_reverse(rel_reverse(v)) != v:
        report.add("reverse", "reversing twice changes V", str(v))
    return report


def _expect(structure, cls: type, what: str):
    if not isinstance(structure, cls):
        raise StructuralError(f"the file does not hold a {what}")
    return structure


def run_check(structure, name: str | None, kind: str | None, config: VolutConfig) -> ValidationReport:
    """Dispatch to the checker called ``name``, or the default for the structure's type.

    Raises:
        StructuralError: if the structure does not fit the checker
    """
    if name is None:
        for cls, default in (
            (VolutiveStructure, "volutive"),
            (FiniteCategory, "category"),
            (ClosedSymMonoidal, "closed"),
            (Pairing, "pairing"),
            (Profunctor, "profunctor"),
            (LinearRelation, "relation"),
            (Bimodule, "bimodule"),
        ):
            if isinstance(structure, cls):
                name = default
                break
    if name == "category":
        if isinstance(structure, VolutiveStructure):
            structure = structure.base
        return check_category(_expect(structure, FiniteCategory, "category"), config)
    if name in ("volutive", "dagger", "zorro", "roundtrip"):
        v = _expect(structure, VolutiveStructure, "volutive structure")
        if name == "volutive":
            return check_volutive(v, kind, config)
        if name == "dagger":
            return check_dagger(dagger_category(v, config), config)
        if name == "zorro":
            return verify_zorro(adjunction_data_from_volutive(v), config)
        return check_round_trip(v, config)
    if name == "closed":
        return check_closed_structure(_expect(structure, ClosedSymMonoidal, "closed structure"), config)
    if name == "pairing":
        return check_pairing(_expect(structure, Pairing, "pairing"), config)
    if name == "profunctor":
        return check_profunctor(_expect(structure, Profunctor, "profunctor"), config)
    if name == "relation":
        return check_relation(_expect(structure, LinearRelation, "linear relation"))
    if name == "bimodule":
        return check_bimodule(_expect(structure, Bimodule, "bimodule"))
    raise StructuralError(f"no checker for {type(structure).__name__}")


def register_commands(cli):
    """Register the check command.

    Args:
        cli: The VolutCLI instance
    """

    def check(args: argparse.Namespace, config: VolutConfig) -> int:
        """Load a structure and run one checker on it.

        Args:
            args: Parsed arguments
            config: The resolved configuration
        """
        structure = load_structure(args.file)
        report = run_check(structure, args.structure, args.kind, config)
        if not report.ok:
            logger.info(f"{args.file}: {len(report.violations)} violation(s)")
        return emit_report(args, report)

    sub = cli.command("check", "run a checker on a saved structure", check)
    sub.add_argument("file")
    sub.add_argument("--structure", choices=STRUCTURES, help="checker to run")
    sub.add_argument("--kind", choices=["strict", "lax"], help="coherence level for volutive checks")
