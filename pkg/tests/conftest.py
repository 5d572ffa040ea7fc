import numpy as np
import pytest

from dexlab import WeightSpec, recurrence_coefficients


@pytest.fixture(scope="session")
def hermite_weight():
    return WeightSpec.power(2.0)


@pytest.fixture(scope="session")
def hermite_table(hermite_weight):
    """beta = 2 table to degree 40 (alpha_n = sqrt(n+1)/2 in closed form)."""
    return recurrence_coefficients(hermite_weight, 40, 1e-10)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
