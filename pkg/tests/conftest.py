import numpy as np
import pytest

from rsmsr.field import make_tower

@pytest.fixture(scope="session")
def small_tower():
    """q=2, s=2, primes (3,): ℓ = 6, f = x³+x+1, g = y²+y+1."""
    return make_tower(2, 2, [3])


@pytest.fixture(scope="session")
def two_alpha_tower():
    """q=2, s=2, primes (3, 5): ℓ = 30."""
    return make_tower(2, 2, [3, 5])


@pytest.fixture(scope="session")
def ternary_tower():
    """q=3, s=2, primes (3, 5): ℓ = 30."""
    return make_tower(3, 2, [3, 5])


@pytest.fixture(scope="session")
def desk_tower():
    """q=2, s=2, primes (3, 5, 7, 11): ℓ = 2310."""
    return make_tower(2, 2, [3, 5, 7, 11])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
