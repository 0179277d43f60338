import pytest

from mlpsim.moore import build_mlp_machine


@pytest.fixture(scope="session")
def mlp():
    return build_mlp_machine()
