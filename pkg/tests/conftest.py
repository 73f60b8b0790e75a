from __future__ import annotations

import numpy as np
import pytest
import structlog
from numpy.random import Generator


@pytest.fixture
def fx_rng() -> Generator:
    return np.random.default_rng(seed=25)


@pytest.fixture(autouse=True)
def reset_logging():
    # the CLI points structlog at the runner's stderr, which is closed afterwards
    yield
    structlog.reset_defaults()
