"""Synthetic stand-ins for natural 8-bit test images.

Two generators with natural-image-like spectra: random-phase noise with a
power-law amplitude, and the dead-leaves occlusion model.
"""
from pathlib import Path

import numpy as np

from .spectral import freq_grid, idft2


def _to_8bit_range(a):
    a = a - a.min()
    return 255.0 * a / a.max()


def natural_texture(n, seed=0, exponent=1.0):
    """Random-phase texture with amplitude spectrum ``|xi|^-exponent``, scaled to [0, 255]."""
    rng = np.random.default_rng(seed)
    xi1, xi2 = freq_grid(n)
    amp = 1.0 / np.maximum(np.hypot(xi1, xi2), 1.0) ** exponent
    img = np.real(idft2(amp * np.exp(2j * np.pi * rng.random((n, n)))))
    return _to_8bit_range(img)


def dead_leaves(n, seed=0, n_leaves=None, r_min=None, r_max=None):
    """Overlapping discs with power-law radii and uniform gray levels."""
    rng = np.random.default_rng(seed)
    r_min = r_min or max(1.0, n / 128)
    r_max = r_max or n / 4
    n_leaves = n_leaves or 40 * n
    img = np.full((n, n), np.nan)
    yy, xx = np.mgrid[0:n, 0:n]
    # Radii with density ~ r^-3 on [r_min, r_max] by inverse transform sampling.
    u = rng.random(n_leaves)
    radii = 1.0 / np.sqrt(u / r_max ** 2 + (1 - u) / r_min ** 2)
    centers = rng.random((n_leaves, 2)) * n
    grays = rng.random(n_leaves) * 255.0
    for (cy, cx), r, g in zip(centers, radii, grays):
        lo_y, hi_y = max(int(cy - r), 0), min(int(cy + r) + 1, n)
        lo_x, hi_x = max(int(cx - r), 0), min(int(cx + r) + 1, n)
        sub = img[lo_y:hi_y, lo_x:hi_x]
        inside = (yy[lo_y:hi_y, lo_x:hi_x] - cy) ** 2 + (xx[lo_y:hi_y, lo_x:hi_x] - cx) ** 2 <= r * r
        sub[inside & np.isnan(sub)] = g
        if not np.isnan(img).any():
            break
    img[np.isnan(img)] = 127.5
    return img


def make_dataset(directory, n, count=4, seed=0):
    """Write ``count`` PGM images alternating between the two generators; returns the paths."""
    from .formats import write_image

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for k in range(count):
        if k % 2 == 0:
            img, name = natural_texture(n, seed=seed + k), f"texture_{k:02d}.pgm"
        else:
            img, name = dead_leaves(n, seed=seed + k), f"leaves_{k:02d}.pgm"
        path = directory / name
        write_image(path, img)
        paths.append(path)
    return paths
