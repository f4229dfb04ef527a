import pytest

from dynla._kernels import warmup


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    """Compile (or load cached) numba kernels once per session."""
    warmup()
