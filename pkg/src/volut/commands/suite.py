"""
Suite commands for volut.

``volut suite NAME...`` runs named check batteries and reports every check.
"""

import argparse
import logging

from volut.commands.common import EXIT_OK, EXIT_VIOLATION, emit
from volut.config import VolutConfig
from volut.suites import BATTERIES, run_suites

logger = logging.getLogger(__name__)


def register_commands(cli):
    """Register the suite command.

    Args:
        cli: The VolutCLI instance
    """

    def suite(args: argparse.Namespace, config: VolutConfig) -> int:
        """Run the requested batteries.

        Args:
            args: Parsed arguments
            config: The resolved configuration
        """
        reports = run_suites(args.names, config, jobs=args.jobs)
        failed = [r.suite for r in reports if not r.ok]
        if failed:
            logger.warning(f"suites with failures: {', '.join(failed)}")
        document = {
            "type": "suite-report",
            "seed": config.seed,
            "ok": not failed,
            "suites": [r.to_dict() for r in reports],
        }
        emit(args, document, "\n\n".join(r.render_text() for r in reports))
        return EXIT_VIOLATION if failed else EXIT_OK

    sub = cli.command("suite", "run named check batteries", suite)
    sub.add_argument("names", nargs="+", choices=[*BATTERIES, "all"], metavar="NAME")
    sub.add_argument("--jobs", type=int, default=1, help="worker processes for several suites")
