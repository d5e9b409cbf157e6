"""
Command modules for volut.

Each module registers one subcommand of the volut command line.
"""

from volut.commands import build, check, morita, prof, rel, suite

__all__ = ["build", "check", "morita", "prof", "rel", "suite"]
