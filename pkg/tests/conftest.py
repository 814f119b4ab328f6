import pytest

from genfree import FreeAbelianGroup, FreeGroup, RAAG, enumerate_ball, model_from_spec


@pytest.fixture(scope="session")
def F2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def Z2():
    return FreeAbelianGroup(2)


@pytest.fixture(scope="session")
def path_raag():
    return RAAG(3, [(0, 1), (1, 2)])


@pytest.fixture(scope="session")
def surface():
    return model_from_spec("surface2", max_radius=5)


@pytest.fixture(scope="session")
def f2_ball8(F2):
    return enumerate_ball(F2, 8)


@pytest.fixture(scope="session")
def f2_ball12(F2):
    return enumerate_ball(F2, 12)


@pytest.fixture(scope="session")
def z2_ball10(Z2):
    return enumerate_ball(Z2, 10)
