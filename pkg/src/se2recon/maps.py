"""Orientation feature maps and the selection operator on their graph."""
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import DimensionError
from .spectral import check_grid, dft2, freq_grid

DEFAULT_N_ALPHA = 64


@dataclass(frozen=True, eq=False)
class FeatureMap:
    """One angle index per pixel.

    ``kind`` is ``"random"``, ``"pinwheel"``, ``"constant"`` or ``"custom"``;
    ``params`` keeps the generator arguments (``rho``, ``n_alpha``, ``j``).
    """

    theta: np.ndarray
    m: int
    kind: str = "custom"
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        theta = np.asarray(self.theta)
        if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
            raise DimensionError(f"feature map must be square, got shape {theta.shape}")
        if not np.issubdtype(theta.dtype, np.integer):
            raise ValueError("feature map entries must be integers")
        if theta.size and (theta.min() < 0 or theta.max() >= self.m):
            raise ValueError(f"feature map entries must lie in [0, {self.m})")
        theta = theta.astype(np.intp, copy=True)
        theta.flags.writeable = False
        object.__setattr__(self, "theta", theta)

    @property
    def n(self):
        return self.theta.shape[0]

    def graph_mask(self):
        """Boolean ``(m, n, n)`` indicator of the graph ``{(x, j): j = theta(x)}``."""
        return self.theta[None] == np.arange(self.m)[:, None, None]

    def __eq__(self, other):
        if not isinstance(other, FeatureMap):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.theta, other.theta)


@dataclass(frozen=True, eq=False)
class PinwheelField:
    phi: np.ndarray
    rho: float
    n_alpha: int
    seed: int | None

    @property
    def n(self):
        return self.phi.shape[0]


def gen_random_map(n, m, seed=0):
    """I.i.d. uniform angle index at every pixel."""
    rng = np.random.default_rng(seed)
    return FeatureMap(rng.integers(0, m, size=(n, n)), m, kind="random", seed=seed)


def gen_pinwheel_field(n, rho, n_alpha=DEFAULT_N_ALPHA, seed=0, phases=None):
    """Random superposition of ``n_alpha`` plane waves with wavenumber ``rho``.

    ``phi(x) = (2 pi / n_alpha) sum_k exp(i (rho (x1 cos a_k + x2 sin a_k) + g_k))``
    with ``a_k = 2 pi k / n_alpha`` and ``g_k`` i.i.d. uniform on ``[0, 2 pi)``
    (or the given ``phases``). Coordinates are centered on the grid.

    Parameters
    ----------
    n : int
        Grid size.
    rho : float
        Wavenumber in radians per pixel; the spectrum sits on the ring of
        radius ``n * rho / (2 pi)`` frequency-grid units.
    n_alpha : int
        Number of quadrature nodes on the circle, at least 8.
    seed : int
        Seed for the random phases.
    phases : array_like, optional
        Explicit phases, overriding the random draw.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if n_alpha < 8:
        raise ValueError(f"n_alpha must be >= 8, got {n_alpha}")
    if phases is None:
        phases = np.random.default_rng(seed).uniform(0.0, 2 * np.pi, size=n_alpha)
    phases = np.broadcast_to(np.asarray(phases, dtype=float), (n_alpha,))
    x = np.arange(n) - n // 2
    alpha = 2 * np.pi * np.arange(n_alpha) / n_alpha
    # Each plane wave is separable: exp(i rho x1 cos a) exp(i rho x2 sin a).
    w1 = np.exp(1j * (rho * np.outer(np.cos(alpha), x) + phases[:, None]))
    w2 = np.exp(1j * rho * np.outer(np.sin(alpha), x))
    phi = (2 * np.pi / n_alpha) * (w1.T @ w2)
    return PinwheelField(phi=phi, rho=float(rho), n_alpha=int(n_alpha), seed=seed)


def quantize_phase(phi, m):
    """``floor(m / (2 pi) * angle(phi))`` with angle taken in ``[0, 2 pi)``."""
    ang = np.mod(np.angle(phi), 2 * np.pi)
    return np.minimum(np.floor(m / (2 * np.pi) * ang).astype(np.intp), m - 1)


def gen_pinwheel_map(n, m, rho, n_alpha=DEFAULT_N_ALPHA, seed=0):
    fld = gen_pinwheel_field(n, rho, n_alpha=n_alpha, seed=seed)
    return FeatureMap(quantize_phase(fld.phi, m), m, kind="pinwheel", seed=seed,
                      params={"rho": float(rho), "n_alpha": int(n_alpha)})


def constant_map(n, m, j):
    if not 0 <= j < m:
        raise ValueError(f"angle index j={j} out of range [0, {m})")
    return FeatureMap(np.full((n, n), j), m, kind="constant", params={"j": int(j)})


def _check_stack(F, fmap):
    F = check_grid(F, "coefficient stack", ndim=3)
    if F.shape != (fmap.m, fmap.n, fmap.n):
        raise DimensionError(f"stack shape {F.shape} does not match map (m, n, n)={(fmap.m, fmap.n, fmap.n)}")
    return F


def select(F, fmap):
    """Keep ``F(x, j)`` where ``j == theta(x)``, zero elsewhere."""
    F = _check_stack(F, fmap)
    return np.where(fmap.graph_mask(), F, 0)


def select_complement(F, fmap):
    F = _check_stack(F, fmap)
    return np.where(fmap.graph_mask(), 0, F)


# -- analysis of pinwheel fields -------------------------------------------

def find_pinwheels(phi):
    """Phase singularities of a complex field.

    The phase winding around every 2x2 plaquette is summed; plaquettes with
    winding ``+-1`` are reported at their centers.

    Returns
    -------
    points : ndarray, shape (k, 2)
        Plaquette centers in pixel coordinates.
    charges : ndarray, shape (k,)
        Winding numbers (+1 or -1).
    """
    ph = np.angle(phi)

    def step(a, b):
        return np.angle(np.exp(1j * (b - a)))

    a, b = ph[:-1, :-1], ph[1:, :-1]
    c, d = ph[1:, 1:], ph[:-1, 1:]
    winding = np.rint((step(a, b) + step(b, c) + step(c, d) + step(d, a)) / (2 * np.pi)).astype(int)
    i, j = np.nonzero(winding)
    return np.column_stack([i + 0.5, j + 0.5]), winding[i, j]


def mean_nn_spacing(points):
    """Mean Euclidean distance from each point to its nearest neighbour."""
    points = np.asarray(points, dtype=float)
    if len(points) < 2:
        return float("nan")
    d, _ = cKDTree(points).query(points, k=2)
    return float(d[:, 1].mean())


def radial_spectrum(phi):
    """Spectral energy binned by rounded radius ``|xi|`` in grid units."""
    phi = check_grid(phi, "field", ndim=2)
    xi1, xi2 = freq_grid(phi.shape[0])
    radius = np.rint(np.hypot(xi1, xi2)).astype(int)
    return np.bincount(radius.ravel(), weights=np.abs(dft2(phi)).ravel() ** 2)


def ring_energy_fraction(phi, radius, rel_width=0.25):
    """Fraction of spectral energy with ``| |xi| - radius | <= rel_width * radius``."""
    xi1, xi2 = freq_grid(phi.shape[0])
    energy = np.abs(dft2(phi)) ** 2
    near = np.abs(np.hypot(xi1, xi2) - radius) <= rel_width * radius
    return float(energy[near].sum() / energy.sum())

