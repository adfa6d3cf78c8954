import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from quantum_search.statevec import random_state  # noqa: E402


@pytest.fixture
def random_unit():
    """Factory for seeded random unit states."""
    return lambda num_sites, seed=7: random_state(num_sites, seed)
