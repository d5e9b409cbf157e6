"""
Command-line front-end for volut.

Exit codes: 0 when every check passes, 1 when a violation is found and 2 for
malformed input or an exhausted resource cap.
"""

import argparse
import logging
import sys
from collections.abc import Callable

from volut.commands import build, check, morita, prof, rel, suite
from volut.commands.common import EXIT_ERROR
from volut.config import VolutConfig, configure_logging
from volut.errors import PreconditionError, ResourceCapExceeded, StructuralError

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, VolutConfig], int]


class VolutCLI:
    """The argument parser with every command module registered on it."""

    def __init__(self):
        self.common = argparse.ArgumentParser(add_help=False)
        self.common.add_argument("--seed", type=int, help="seed for every random choice")
        self.common.add_argument("--samples", type=int, help="sample count for sampled checks")
        self.common.add_argument("--cap", type=int, help="morphism cap for materialized categories")
        self.common.add_argument("-o", "--output", help="write the result to this file")
        self.common.add_argument(
            "--format", choices=["json", "text"], default="json", help="report format"
        )
        self.common.add_argument("-v", "--verbose", action="store_true", help="log progress")
        self.parser = argparse.ArgumentParser(
            prog="volut", description="Finite volutive categories: build, check and compare."
        )
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        for module in (build, check, suite, prof, morita, rel):
            module.register_commands(self)

    def command(self, name: str, help: str, handler: Handler | None = None) -> argparse.ArgumentParser:
        """Add a subcommand that understands the shared flags."""
        sub = self.subparsers.add_parser(name, help=help, parents=[self.common])
        if handler is not None:
            sub.set_defaults(handler=handler)
        return sub

    def run(self, argv: list[str] | None = None) -> int:
        args = self.parser.parse_args(argv)
        try:
            config = VolutConfig.load_env().with_overrides(
                seed=args.seed, samples=args.samples, cap=args.cap
            )
        except ValueError as e:
            print(f"volut: {e}", file=sys.stderr)
            return EXIT_ERROR
        configure_logging("INFO" if args.verbose else config.log_level)
        handler = getattr(args, "handler", None)
        if handler is None:
            self.parser.print_help()
            return EXIT_ERROR
        try:
            return handler(args, config)
        except (StructuralError, PreconditionError, ResourceCapExceeded, ValueError, KeyError) as e:
            logger.error(f"{args.command} failed: {e}")
            print(f"volut {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_ERROR


def main(argv: list[str] | None = None) -> None:
    """Main entry point for the CLI."""
    sys.exit(VolutCLI().run(argv))
