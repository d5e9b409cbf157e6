"""
Helpers shared by the command modules.
"""

import argparse
import json
import logging
import pathlib
import re
import sys
from collections.abc import Mapping
from typing import Any

from volut.errors import StructuralError, ValidationReport
from volut.fincat import (
    FiniteCategory,
    chain_category,
    discrete_category,
    terminal_category,
    walking_arrow,
)
from volut.serialize import load_structure
from volut.volutive import VolutiveStructure, terminal_volutive, walking_arrow_volutive

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2

_NAMED = re.compile(r"^(chain|discrete)(\d+)$")


def emit(args: argparse.Namespace, document: Mapping[str, Any], text: str | None = None) -> None:
    """Write a document to -o or stdout in the requested format."""
    if args.format == "text" and text is not None:
        payload = text + "\n"
    else:
        payload = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    if args.output:
        path = pathlib.Path(args.output)
        path.write_text(payload)
        logger.info(f"Wrote {path}")
    else:
        sys.stdout.write(payload)


def emit_report(args: argparse.Namespace, report: ValidationReport) -> int:
    lines = [report.summary()] + [f"  {v.kind}: {v.message} [{v.witness}]" for v in report.violations]
    emit(args, report.to_dict(), "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def named_category(name: str) -> FiniteCategory:
    """terminal, arrow, chainN, discreteN or a category document.

    Raises:
        StructuralError: if the name is unknown and no such file exists
    """
    if name == "terminal":
        return terminal_category()
    if name == "arrow":
        return walking_arrow()
    match = _NAMED.match(name)
    if match:
        n = int(match.group(2))
        return chain_category(n) if match.group(1) == "chain" else discrete_category(n)
    structure = load_structure(name)
    if isinstance(structure, VolutiveStructure):
        return structure.base
    if not isinstance(structure, FiniteCategory):
        raise StructuralError(f"{name} does not hold a category")
    return structure


def named_volutive(name: str) -> VolutiveStructure:
    if name == "terminal":
        return terminal_volutive()
    if name == "arrow":
        return walking_arrow_volutive()
    structure = load_structure(name)
    if not isinstance(structure, VolutiveStructure):
        raise StructuralError(f"{name} does not hold a volutive structure")
    return structure
