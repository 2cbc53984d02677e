import pytest
from hypothesis import HealthCheck, settings

from sectorren.powertriples import TriplesContext
from sectorren.tiling import DominantSequence

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def golden():
    return TriplesContext.from_word("LR")


@pytest.fixture(scope="session")
def golden_seq(golden):
    return DominantSequence(golden)
