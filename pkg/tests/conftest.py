import pytest

from src.egorovga.algebra.domain import Domain
from src.egorovga.algebra.mollifier import build_kernel
from src.egorovga.core.config import EgorovConfig


@pytest.fixture(scope="session")
def kernel():
    """The default m=2 kernel, built once per test session."""
    return build_kernel(m=2)


@pytest.fixture
def config():
    return EgorovConfig()


@pytest.fixture
def interval():
    return Domain.interval(-2.0, 2.0)


@pytest.fixture
def coarse_grid():
    """rho = 2^-8 .. 2^-12, enough samples for a q=5 dictionary."""
    return [2.0**-j for j in range(8, 13)]
