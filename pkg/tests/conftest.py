import pytest

from growthlab.grids import PolarGrid


@pytest.fixture(scope="session")
def grid1():
    return PolarGrid.build(1, panels=32, points_per_panel=8)


@pytest.fixture(scope="session")
def grid2():
    return PolarGrid.build(2, panels=24, points_per_panel=8, angular_factor=0.25)


@pytest.fixture(scope="session")
def grid3():
    return PolarGrid.build(3, panels=24, points_per_panel=8, angular_factor=0.25)
