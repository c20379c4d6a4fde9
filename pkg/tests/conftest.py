import numpy as np
import pytest

from se2recon import WaveletParams, build_system


def direct_circ_convolve(f, g):
    """O(N^4) double sum ``sum_y f(y) g((x - y) mod N)``."""
    n = f.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for x1 in range(n):
        for x2 in range(n):
            acc = 0j
            for y1 in range(n):
                for y2 in range(n):
                    acc += f[y1, y2] * g[(x1 - y1) % n, (x2 - y2) % n]
            out[x1, x2] = acc
    return out


def rel(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(np.asarray(b))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def sys16():
    return build_system(WaveletParams.scaled(16, m=4))


@pytest.fixture(scope="session")
def sys64():
    return build_system(WaveletParams.scaled(64, m=8))


@pytest.fixture(scope="session")
def sys8():
    return build_system(WaveletParams.scaled(8, m=4))


def random_bandlimited(system, rng):
    from se2recon import bandlimit
    n = system.n
    return np.real(bandlimit(rng.standard_normal((n, n)), system))


def random_stack(system, rng):
    shape = (system.m, system.n, system.n)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
