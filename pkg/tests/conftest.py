import numpy as np
import pytest

from mixcurv.linalg import PAULI

SX, SY, SZ = PAULI
HALF_PI = np.pi / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
