import numpy as np
import pytest

from helpers import ex4_set


@pytest.fixture
def ex4():
    """The two-projection counterexample set {diag(1,0), diag(0,1)}."""
    return ex4_set()


@pytest.fixture
def rng():
    return np.random.default_rng(181181)
