import random
from typing import Callable, Generator

import pytest

from hurwitz import config
from hurwitz.approx.rates import ApproxRate, parse_rate


@pytest.fixture
def rng() -> random.Random:
    return random.Random(config.DEFAULT_SEED)


@pytest.fixture
def run_dir(tmp_path) -> Generator:
    path = tmp_path / "run"
    path.mkdir()
    yield path


@pytest.fixture
def make_rate() -> Callable[[str], ApproxRate]:
    return parse_rate
