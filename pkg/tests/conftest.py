import random

import pytest

from volut.config import VolutConfig
from volut.volutive import terminal_volutive, walking_arrow_volutive


@pytest.fixture
def config():
    return VolutConfig(samples=60, seed=7)


@pytest.fixture
def rng():
    return random.Random(7)


@pytest.fixture
def arrow():
    return walking_arrow_volutive()


@pytest.fixture
def terminal():
    return terminal_volutive()
