"""
Shared fixtures for the tenfold test suite
"""
import numpy as np
import pytest

from tenfold.config import get_settings
from tenfold.models.band_models import BlochModel
from tenfold.services.model_zoo import make_model, sample_grid
from tenfold.services.numkit import pauli_string


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


@pytest.fixture
def sample():
    """sample("kitaev_chain", grid=16, mu=0.5, t=1, delta=1)"""

    def _sample(name, grid=32, **params):
        return sample_grid(make_model(name, params), grid)

    return _sample


@pytest.fixture
def constant_model():
    """Momentum-independent model H(k) = matrix"""

    def _constant(matrix, dim=1, name="constant"):
        matrix = np.asarray(matrix, dtype=complex)

        def hamiltonian(ks):
            return np.broadcast_to(matrix, ks.shape[:-1] + matrix.shape).copy()

        return BlochModel(name=name, dim=dim, bands=matrix.shape[0], hamiltonian=hamiltonian)

    return _constant


@pytest.fixture
def random_hermitian(rng):
    def _random(n):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return 0.5 * (a + a.conj().T)

    return _random


@pytest.fixture
def random_unitary(rng):
    def _random(n, batch=()):
        z = rng.normal(size=batch + (n, n)) + 1j * rng.normal(size=batch + (n, n))
        q, r = np.linalg.qr(z)
        d = np.diagonal(r, axis1=-2, axis2=-1)
        return q * (d / np.abs(d))[..., None, :]

    return _random


@pytest.fixture
def tau():
    return {label: pauli_string(label) for label in ("0", "x", "y", "z")}


@pytest.fixture(scope="session")
def dirac_topological():
    return sample_grid(make_model("dirac_3d_chiral", {"m": 2.0}), 32)


@pytest.fixture(scope="session")
def dirac_trivial():
    return sample_grid(make_model("dirac_3d_chiral", {"m": 4.0}), 32)
