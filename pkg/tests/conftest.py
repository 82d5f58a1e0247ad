import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from simplexgrey.data import load_dataset, to_compositions

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("ci", derandomize=True, max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def canada():
    return to_compositions(load_dataset("canada"))


@pytest.fixture(scope="session")
def india():
    return to_compositions(load_dataset("india"))


@pytest.fixture(scope="session")
def china():
    return to_compositions(load_dataset("china"))
