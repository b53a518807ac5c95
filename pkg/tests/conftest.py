import numpy as np
import pytest

from vncert.haar import RngStream, sample_haar_unitary


@pytest.fixture
def rng():
    return RngStream(12345).generator()


def random_density(d, gen):
    g = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_effect(d, gen):
    g = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    p = g @ g.conj().T
    return p / (np.linalg.norm(p, 2) * (1.0 + gen.random()))


def random_unitary(d, gen):
    return sample_haar_unitary(d, gen)
