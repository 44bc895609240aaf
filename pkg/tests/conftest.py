import numpy as np
import pytest

from nhsense.verification import make_rng, random_family, random_hermitian, random_state, random_unitary

KET0 = np.array([1.0, 0.0], dtype=complex)
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


@pytest.fixture
def rng():
    return make_rng(20240811)


__all__ = ["make_rng", "random_family", "random_hermitian", "random_state",
           "random_unitary", "KET0", "KET_PLUS"]
