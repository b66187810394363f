import numpy as np
import pytest

from wavelab.fields import Grid


@pytest.fixture
def line_box():
    # 1-D box on [-8, 8] with h = 0.1
    return Grid(dimension=1, mode="box_dirichlet", half_extent=8.0,
                points_per_axis=161)


@pytest.fixture
def line_periodic():
    return Grid(dimension=1, mode="periodic", half_extent=5.0,
                points_per_axis=64)


@pytest.fixture
def radial():
    return Grid(dimension=3, mode="radial3d", half_extent=10.0,
                points_per_axis=201)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
