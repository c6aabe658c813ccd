import numpy as np
import pytest

from tunablezz.devices import bundled_device
from tunablezz.hilbert import TWO_PI

GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6
KHZ = TWO_PI * 1e3


@pytest.fixture(scope="session")
def device_a():
    return bundled_device("device_a")


@pytest.fixture(scope="session")
def device_b():
    return bundled_device("device_b")


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random full-rank density matrix via a Ginibre-style construction."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
