import numpy as np
import pytest

from tracedist import gauss


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def single_mode_corpus(rng, n_mixed=12, n_pure=6):
    """Random single-mode states kept mild enough that a cutoff-100
    Fock oracle is exact to ~1e-10."""
    mixed = [gauss.random_state(1, rng, max_nbar=1.2, max_disp=1.5) for _ in range(n_mixed)]
    pure = [gauss.random_pure_ket(1, rng, max_disp=1.5) for _ in range(n_pure)]
    return mixed, pure
