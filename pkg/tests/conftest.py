import numpy as np
import pytest

from runup import (
    DirectConfig,
    PhysicalInitialData,
    SampledFunction,
    direct_solution,
)


def gaussian(x, a=0.01, k=4.0, xc=1.0):
    return a * np.exp(-k * (x - xc) ** 2)


@pytest.fixture(scope="session")
def gaussian_data():
    x = np.linspace(-0.05, 6.0, 4001)
    return PhysicalInitialData(SampledFunction(x, gaussian(x), name="eta0"))


@pytest.fixture(scope="session")
def gaussian_direct(gaussian_data):
    return direct_solution(gaussian_data, DirectConfig())
