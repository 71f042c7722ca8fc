import pytest

from oddgon.derivation import build_pipeline_diagrams
from oddgon.surface import build_surface


@pytest.fixture(scope="session")
def pentagon():
    return build_surface(5)


@pytest.fixture(scope="session")
def heptagon():
    return build_surface(7)


@pytest.fixture(scope="session")
def pipelines(pentagon, heptagon):
    """Full diagram pipelines for the three small surfaces; expensive, built once."""
    return {
        5: build_pipeline_diagrams(pentagon),
        7: build_pipeline_diagrams(heptagon),
        9: build_pipeline_diagrams(build_surface(9)),
    }
