"""Grid conventions and the 2D DFT on Z_N x Z_N.

Images are ``(n, n)`` arrays, coefficient stacks are ``(m, n, n)`` arrays
(angle index first). Axis ``-2`` carries the first coordinate ``x1`` (and
``xi1`` in frequency), axis ``-1`` the second. The forward transform is
unnormalized and the inverse carries the ``1/N^2`` factor, so that
``dft2(f * g) == dft2(f) * dft2(g)`` holds without extra constants.
"""
import numpy as np
import scipy.fft as sfft

from .errors import DimensionError

# workers=-1 splits batched planes across threads; per-plane results are
# identical to a sequential transform.
_WORKERS = -1


def check_grid(a, name="array", ndim=None):
    """Validate a square, even-sized grid on the trailing two axes."""
    a = np.asarray(a)
    if ndim is not None and a.ndim != ndim:
        raise DimensionError(f"{name}: expected {ndim} dimensions, got shape {a.shape}")
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"{name}: trailing axes must be square, got shape {a.shape}")
    if a.shape[-1] % 2:
        raise DimensionError(f"{name}: grid size must be even, got {a.shape[-1]}")
    return a


def dft2(f):
    """Unnormalized forward DFT over the last two axes (batched)."""
    return sfft.fft2(np.asarray(f, dtype=complex), axes=(-2, -1), workers=_WORKERS)


def idft2(spec):
    """Inverse of :func:`dft2`, including the ``1/N^2`` factor."""
    return sfft.ifft2(np.asarray(spec, dtype=complex), axes=(-2, -1), workers=_WORKERS)


def signed_freq(index, n):
    """Map ``index`` in ``[0, n)`` to its signed representative in ``[-n/2, n/2)``."""
    index = np.asarray(index)
    out = np.where(index < n // 2, index, index - n)
    return int(out) if out.ndim == 0 else out


def freq_grid(n):
    """Signed frequency coordinates ``(xi1, xi2)`` as two ``(n, n)`` int arrays."""
    k = signed_freq(np.arange(n), n)
    return np.meshgrid(k, k, indexing="ij")


def centered_coords(n):
    """Signed spatial coordinates in ``[-n/2, n/2)`` on the natural pixel order."""
    x = np.arange(n) - n // 2
    return np.meshgrid(x, x, indexing="ij")


def circ_convolve(f, g):
    """Circular convolution ``sum_y f(y) g((x - y) mod N)`` via the FFT."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape[-2:] != g.shape[-2:]:
        raise DimensionError(f"convolution of grids {f.shape} and {g.shape}")
    return idft2(dft2(f) * dft2(g))
