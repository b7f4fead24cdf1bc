import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_metzler(rng: np.random.Generator, n: int) -> np.ndarray:
    """Nonnegative matrix with every row sum strictly below 1."""
    A = rng.uniform(0.0, 1.0, (n, n))
    targets = rng.uniform(0.3, 0.95, (n, 1))
    return A / A.sum(axis=1, keepdims=True) * targets
