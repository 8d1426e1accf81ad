import numpy as np
import pytest

from pwlab import geometry


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def disc():
    return geometry.Ball(np.zeros(2), 1.0)


@pytest.fixture
def unit_square():
    return geometry.unit_box(2)


@pytest.fixture
def right_triangle():
    return geometry.HPolytope([[-1, 0], [0, -1], [1, 1]], [0, 0, 1])


@pytest.fixture
def shifted_pyramid():
    pyr = geometry.Pyramid(1.0, 1.0, dim=3).hpolytope()
    shift = np.array([0.0, 0.0, -0.3])
    return geometry.HPolytope(pyr.normals, pyr.offsets + pyr.normals @ shift)
