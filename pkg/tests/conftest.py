import os

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture(scope="session")
def zeros_path():
    return os.path.join(HERE, "data", "riemann_zeros_100.txt")
