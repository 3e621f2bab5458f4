import numpy as np
import pytest

from relational_som import PointCloud, validate


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run slow acceptance experiments",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def random_dissimilarity(rng):
    """Symmetric non-negative matrix with a zero diagonal (not Euclidean)."""

    def build(n):
        values = rng.uniform(0.1, 1.0, size=(n, n))
        values = np.triu(values, 1)
        return validate(values + values.T)

    return build


@pytest.fixture
def corner_points():
    return PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
