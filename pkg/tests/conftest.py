import pytest

from irsgeom.irs import action_from_cycles
from irsgeom.models import FreeGroupModel, HalfPlaneModel, LamplighterModel
from irsgeom.models.halfplane import SL2


@pytest.fixture(scope="session")
def free():
    return FreeGroupModel(2)


@pytest.fixture(scope="session")
def plane():
    return HalfPlaneModel()


@pytest.fixture(scope="session")
def lamp():
    return LamplighterModel()


@pytest.fixture
def three_point():
    # a -> (1 2 3), b -> (1 2)
    return action_from_cycles(3, [(1, 2, 3)], [(1, 2)])


CAT = SL2(2, 1, 1, 1)
SHEAR = SL2(1, 1, 0, 1)
