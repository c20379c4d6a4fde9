import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from se2recon.errors import DimensionError
from se2recon.spectral import circ_convolve, dft2, freq_grid, idft2, signed_freq

from conftest import direct_circ_convolve, rel

even_sizes = st.sampled_from([2, 4, 6, 8, 12, 16])
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_dft_of_constant():
    spec = dft2(np.ones((4, 4)))
    expected = np.zeros((4, 4))
    expected[0, 0] = 16
    np.testing.assert_array_equal(spec, expected)


def test_dft_of_delta():
    f = np.zeros((4, 4))
    f[0, 0] = 1
    np.testing.assert_array_equal(dft2(f), np.ones((4, 4)))


def test_dft_matches_explicit_sum(rng):
    n = 6
    f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = np.arange(n)
    expected = np.empty((n, n), dtype=complex)
    for k1 in range(n):
        for k2 in range(n):
            phase = np.exp(-2j * np.pi * (np.outer(x, np.ones(n)) * k1 + np.outer(np.ones(n), x) * k2) / n)
            expected[k1, k2] = np.sum(phase * f)
    assert rel(dft2(f), expected) < 1e-12


def test_round_trip_random(rng):
    f = rng.standard_normal((8, 8))
    assert rel(idft2(dft2(f)), f) <= 1e-12


def test_idft_of_ones_is_delta():
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    np.testing.assert_allclose(idft2(np.ones((4, 4))), expected, atol=1e-15)


def test_idft_of_zero():
    np.testing.assert_array_equal(idft2(np.zeros((4, 4))), 0)


@pytest.mark.parametrize("index,n,expected", [(0, 8, 0), (7, 8, -1), (4, 8, -4), (3, 8, 3)])
def test_signed_freq(index, n, expected):
    assert signed_freq(index, n) == expected


@given(even_sizes)
def test_signed_freq_bijection(n):
    vals = signed_freq(np.arange(n), n)
    assert sorted(vals.tolist()) == list(range(-n // 2, n // 2))
    assert np.all(np.mod(vals, n) == np.arange(n))


def test_freq_grid_axes():
    xi1, xi2 = freq_grid(4)
    assert xi1[:, 0].tolist() == [0, 1, -2, -1]
    assert xi2[0, :].tolist() == [0, 1, -2, -1]


def test_convolve_identity(rng):
    f = rng.standard_normal((8, 8))
    delta = np.zeros((8, 8))
    delta[0, 0] = 1
    assert rel(circ_convolve(f, delta), f) < 1e-14


def test_convolve_shift_composition():
    f = np.zeros((4, 4))
    g = np.zeros((4, 4))
    f[1, 0] = 1
    g[0, 1] = 1
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    np.testing.assert_allclose(circ_convolve(f, g), expected, atol=1e-15)


@pytest.mark.parametrize("n", [2, 4, 8, 10])
def test_convolve_matches_direct_sum(rng, n):
    f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    assert rel(circ_convolve(f, g), direct_circ_convolve(f, g)) <= 1e-10


def test_convolve_size_mismatch():
    with pytest.raises(DimensionError):
        circ_convolve(np.zeros((4, 4)), np.zeros((6, 6)))


@settings(max_examples=40, deadline=None)
@given(even_sizes.flatmap(lambda n: arrays(np.float64, (n, n), elements=finite)))
def test_round_trip_and_parseval(f):
    spec = dft2(f)
    energy = np.sum(np.abs(f) ** 2)
    assert np.linalg.norm(idft2(spec) - f) <= 1e-10 * max(np.linalg.norm(f), 1e-300)
    assert abs(energy - np.sum(np.abs(spec) ** 2) / f.size) <= 1e-10 * max(energy, 1e-300)


def test_batched_planes_bit_identical(rng):
    stack = rng.standard_normal((5, 16, 16)) + 1j * rng.standard_normal((5, 16, 16))
    batched = dft2(stack)
    for j in range(5):
        np.testing.assert_array_equal(batched[j], dft2(stack[j]))
    back = idft2(batched)
    for j in range(5):
        np.testing.assert_array_equal(back[j], idft2(batched[j]))
