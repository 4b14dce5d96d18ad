import pytest
from hypothesis import settings

from sinrgames import ScenarioParams

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")


@pytest.fixture
def params():
    return ScenarioParams(L=10.0, alpha=2.0, sigma=0.3)
