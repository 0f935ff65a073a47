import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def random_isometry(rng: np.random.Generator, scale: float = 1.0):
    """Random orthogonal matrix (reflections included), shift, and scale."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if rng.random() < 0.5:
        q[:, 0] *= -1
    return q, rng.normal(size=3) * 3, scale


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
