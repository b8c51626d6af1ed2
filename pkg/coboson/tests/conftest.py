"""
Shared fixtures
"""
import pytest

from services.spectrum import build_spectrum


@pytest.fixture
def half_spectrum():
    """zs = [0.5] at the default tolerance: J = 40, λ_j = 2^-(j+1)"""
    return build_spectrum([0.5])


@pytest.fixture
def oracle_spectrum():
    """Twelve leading modes of zs = [0.5], small enough for enumeration"""
    return build_spectrum([0.5]).head(12)


@pytest.fixture(scope="session")
def artifact_dir(tmp_path_factory):
    """Where the arbitration reports are archived for the run"""
    path = tmp_path_factory.getbasetemp() / "arbitration"
    path.mkdir(parents=True, exist_ok=True)
    return path
