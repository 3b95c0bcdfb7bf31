"""Shared fixtures."""

import numpy as np
import pytest
from loguru import logger

from src.config import SimulationConfig
from src.core.collision_profiles import CollisionProfile
from src.core.function_model import FunctionTable


@pytest.fixture(autouse=True)
def quiet_logs():
    """Keep loguru output out of the test report."""
    logger.remove()
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def sim_config():
    return SimulationConfig()


@pytest.fixture
def subspace_config():
    """Forces the two-amplitude engine for every n >= 2."""
    return SimulationConfig(statevector_max_n=1)


@pytest.fixture
def example_profile():
    """n=16 with one small type (2) and one large type (3) at d=0.6."""
    return CollisionProfile(n=16, counts={1: 6, 2: 4, 3: 6})


@pytest.fixture
def two_to_one():
    return FunctionTable.from_values([0, 0, 1, 1])


@pytest.fixture
def mixed_four():
    return FunctionTable.from_values([0, 0, 1, 2])
