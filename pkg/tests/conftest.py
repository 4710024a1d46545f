import pytest

from perivar.biquad import gamma_series


@pytest.fixture(scope="session")
def series5():
    """Generic parameter recursion through period 5 (shared: ~2 s to build)."""
    return gamma_series(5)
