"""
Configuration management for volut.

Resource caps, sampling and the global seed are read from the environment
(optionally through a ``.env`` file) and can be overridden from the command line.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(pathname)s:%(lineno)d - %(levelname)s - %(message)s"


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"Invalid {name}. Please ensure it is an integer.")
    if value < 0:
        raise ValueError(f"Invalid {name}. Please ensure it is non-negative.")
    return value


@dataclass(frozen=True)
class VolutConfig:
    """Caps and randomness settings shared by every operation."""

    cap: int = 20_000
    check_cap: int = 200_000
    samples: int = 500
    seed: int = 7
    search_cap: int = 1_000_000
    morita_cap: int = 64
    log_level: str = "WARNING"

    @classmethod
    def load_env(cls) -> VolutConfig:
        load_dotenv()
        defaults = cls()
        config = cls(
            cap=_int_env("VOLUT_CAP", defaults.cap),
            check_cap=_int_env("VOLUT_CHECK_CAP", defaults.check_cap),
            samples=_int_env("VOLUT_SAMPLES", defaults.samples),
            seed=_int_env("VOLUT_SEED", defaults.seed),
            search_cap=_int_env("VOLUT_SEARCH_CAP", defaults.search_cap),
            morita_cap=_int_env("VOLUT_MORITA_CAP", defaults.morita_cap),
            log_level=os.getenv("VOLUT_LOG_LEVEL", defaults.log_level).upper(),
        )
        logger.debug(f"Loaded configuration {config}")
        return config

    def with_overrides(self, **overrides) -> VolutConfig:
        """Return a copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def resolve(config: VolutConfig | None) -> VolutConfig:
    return config if config is not None else VolutConfig()


def configure_logging(level: str = "WARNING") -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), format=LOG_FORMAT)
