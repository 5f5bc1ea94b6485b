import pytest

from gen import named_graphs


@pytest.fixture(scope="session")
def named():
    return named_graphs()
