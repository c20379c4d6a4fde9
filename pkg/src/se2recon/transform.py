"""Discrete SE(2) Gabor wavelet system and its transforms.

All operators act in the frequency domain on the signed grid. For a grid of
size ``n`` and ``m`` uniformly spaced angles ``theta_j = 2*pi*j/m`` the
wavelet spectra are Gaussians of width ``s`` centered at
``-(p cos theta_j, p sin theta_j)``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, IllConditionedError
from .spectral import check_grid, dft2, freq_grid, idft2

#: Grid-unit parameters used for the 512 x 512 experiments.
REFERENCE_PARAMS = dict(n=512, m=12, s=51.0, p=170.0, r=252.0)

# Smallest admissible A/B before the band is declared ill-conditioned.
MIN_FRAME_RATIO = 1e-12


@dataclass(frozen=True)
class WaveletParams:
    """Parameters of the discrete Gabor system.

    ``s``, ``p`` and ``r`` are measured in frequency-grid units (cycles per
    grid width), so they scale linearly with ``n`` for a fixed pixel-level
    wavelet shape.
    """

    n: int
    m: int
    s: float
    p: float
    r: float

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError(f"grid size n must be even and >= 2, got {self.n}")
        if self.m < 1:
            raise ValueError(f"angle count m must be >= 1, got {self.m}")
        if not self.s > 0:
            raise ValueError(f"Gaussian width s must be positive, got {self.s}")
        if not self.p >= 0:
            raise ValueError(f"carrier frequency p must be >= 0, got {self.p}")
        if not 0 < self.r <= self.n / 2 * np.sqrt(2):
            raise ValueError(f"bandlimit radius r must lie in (0, n/sqrt(2)], got {self.r}")

    @classmethod
    def reference(cls):
        return cls(**REFERENCE_PARAMS)

    @classmethod
    def scaled(cls, n, m=None):
        """Reference 512-grid parameters with ``s, p, r`` rescaled linearly to grid size ``n``."""
        k = n / REFERENCE_PARAMS["n"]
        return cls(n=n, m=REFERENCE_PARAMS["m"] if m is None else m,
                   s=REFERENCE_PARAMS["s"] * k, p=REFERENCE_PARAMS["p"] * k,
                   r=REFERENCE_PARAMS["r"] * k)


@dataclass(frozen=True)
class FrameReport:
    a: float
    b: float
    convention: str = "squared"

    @property
    def ratio(self):
        return self.b / self.a

    @property
    def cond(self):
        return float(np.sqrt(self.ratio))


@dataclass(frozen=True, eq=False)
class WaveletSystem:
    """Precomputed spectra for one parameter set; immutable after build.

    Attributes
    ----------
    psi_hat : ndarray, shape (m, n, n)
        Wavelet spectra, one plane per angle.
    calderon : ndarray, shape (n, n)
        ``sum_j |psi_hat_j|^2``.
    mask : ndarray of bool, shape (n, n)
        Open disc ``xi1^2 + xi2^2 < r^2``.
    dual_mult : ndarray, shape (n, n)
        ``mask / calderon``, exactly zero off the mask.
    frame_lower, frame_upper : float
        Min and max of ``calderon`` over the mask.
    """

    params: WaveletParams
    psi_hat: np.ndarray
    calderon: np.ndarray
    mask: np.ndarray
    dual_mult: np.ndarray
    frame_lower: float
    frame_upper: float

    @property
    def n(self):
        return self.params.n

    @property
    def m(self):
        return self.params.m

    @property
    def angles(self):
        return 2 * np.pi * np.arange(self.m) / self.m

    @property
    def frame(self):
        return FrameReport(self.frame_lower, self.frame_upper)

    @property
    def ratio(self):
        return self.frame_upper / self.frame_lower

    @property
    def cond(self):
        return float(np.sqrt(self.ratio))


def gabor_spectra(params, exponent_scale=2.0):
    """Gaussian spectra ``exp(-|xi + p e_j|^2 / (exponent_scale * s^2))``."""
    xi1, xi2 = freq_grid(params.n)
    theta = 2 * np.pi * np.arange(params.m) / params.m
    c1 = params.p * np.cos(theta)[:, None, None]
    c2 = params.p * np.sin(theta)[:, None, None]
    return np.exp(-((xi1 + c1) ** 2 + (xi2 + c2) ** 2) / (exponent_scale * params.s ** 2))


def band_mask(n, r):
    xi1, xi2 = freq_grid(n)
    return xi1 ** 2 + xi2 ** 2 < r ** 2


def _frozen(a):
    a.flags.writeable = False
    return a


def build_system(params):
    """Build the wavelet system for ``params``.

    Raises
    ------
    IllConditionedError
        If the Calderon function vanishes on the band or ``A/B`` drops below
        ``1e-12``; the radius ``r`` is then too large for ``(s, p)``.
    """
    psi_hat = gabor_spectra(params)
    calderon = np.sum(np.abs(psi_hat) ** 2, axis=0)
    mask = band_mask(params.n, params.r)
    on_band = calderon[mask]
    a, b = float(on_band.min()), float(on_band.max())
    if not a > 0 or a / b < MIN_FRAME_RATIO:
        raise IllConditionedError(
            f"Calderon lower bound vanishes on the band: A={a:.3e}, B={b:.3e}; "
            f"bandlimit radius R={params.r} is too large for s={params.s}, p={params.p}")
    dual = np.zeros_like(calderon)
    np.divide(1.0, calderon, out=dual, where=mask)
    return WaveletSystem(
        params=params,
        psi_hat=_frozen(psi_hat),
        calderon=_frozen(calderon),
        mask=_frozen(mask),
        dual_mult=_frozen(dual),
        frame_lower=a,
        frame_upper=b,
    )


def frame_reports(params):
    """Frame bounds under both Calderon conventions.

    ``"squared"`` sums ``|psi_hat_j|^2`` (exponent ``1/s^2``), which is the
    function whose reciprocal makes the dual wavelet exact. ``"unsquared"``
    sums the spectra themselves (exponent ``1/(2 s^2)``).
    """
    mask = band_mask(params.n, params.r)
    out = {}
    for name, scale in (("squared", 1.0), ("unsquared", 2.0)):
        c = gabor_spectra(params, exponent_scale=scale).sum(axis=0)[mask]
        out[name] = FrameReport(float(c.min()), float(c.max()), convention=name)
    return out


def _check_image(f, system):
    f = check_grid(f, "image", ndim=2)
    if f.shape[0] != system.n:
        raise DimensionError(f"image is {f.shape[0]}x{f.shape[1]}, system expects n={system.n}")
    return f


def _check_stack(F, system):
    F = check_grid(F, "coefficient stack", ndim=3)
    if F.shape != (system.m, system.n, system.n):
        raise DimensionError(
            f"stack shape {F.shape} does not match system (m, n, n)={(system.m, system.n, system.n)}")
    return F


def _analysis_sum(F_hat, system):
    # sum_l F_hat(xi, l) conj(psi_hat_l(xi))
    return np.einsum("jab,jab->ab", F_hat, np.conj(system.psi_hat))


def forward(f, system):
    """SE(2) transform: plane ``j`` is ``f`` circularly convolved with ``psi_j``."""
    f = _check_image(f, system)
    return idft2(dft2(f)[None] * system.psi_hat)


def dual_forward(f, system):
    """Transform with the dual wavelet ``gamma_hat_j = dual_mult * psi_hat_j``."""
    f = _check_image(f, system)
    return idft2(dft2(f)[None] * (system.dual_mult * system.psi_hat))


def adjoint(F, system):
    """Adjoint of :func:`forward`: ``sum_j F_j * psi_j^dagger``."""
    F = _check_stack(F, system)
    return idft2(_analysis_sum(dft2(F), system))


def inverse(F, system):
    """Adjoint of the dual transform; left inverse of :func:`forward` on the band."""
    F = _check_stack(F, system)
    return idft2(system.dual_mult * _analysis_sum(dft2(F), system))


def bandlimit(f, system):
    """Zero every frequency outside the open disc of radius ``r``."""
    f = _check_image(f, system)
    return idft2(dft2(f) * system.mask)


def project(F, system):
    """Orthogonal projection onto the range of the transform on the band.

    In frequency, ``P F (xi, j) = dual_mult(xi) psi_hat_j(xi) sum_l F_hat(xi, l) conj(psi_hat_l(xi))``.
    """
    F = _check_stack(F, system)
    s = system.dual_mult * _analysis_sum(dft2(F), system)
    return idft2(s[None] * system.psi_hat)


def wavelet(system, j):
    """Spatial wavelet ``psi_j`` (complex, origin at pixel ``(0, 0)``)."""
    return idft2(system.psi_hat[j])


def dual_wavelet(system, j):
    return idft2(system.dual_mult * system.psi_hat[j])
