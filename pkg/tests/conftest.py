import pytest

from paretosub import CoverageObjective, ModularObjective

CANONICAL_SETS = [{1, 2, 3}, {3, 4}, {4, 5}]


@pytest.fixture
def coverage():
    return CoverageObjective(CANONICAL_SETS)


@pytest.fixture
def modular():
    return ModularObjective([5, 3, 2, 1])
