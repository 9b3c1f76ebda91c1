import numpy as np
import pytest

from fracspray import make_grid, make_sensor_mesh


@pytest.fixture
def grid31():
    return make_grid(31, 31)


@pytest.fixture
def grid21():
    return make_grid(21, 21)


@pytest.fixture
def mesh29(grid31):
    return make_sensor_mesh(29, grid31)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
