"""Project-and-replace reconstruction from feature-map samples.

Starting from the observed coefficients ``F0 = Q W f`` the iteration is::

    H_n = P F_{n-1}
    F_n = (1 - Q) H_n + F0

with ``P`` the projection onto the transform range and ``Q`` the selection
on the graph of the feature map. Images are read off as ``inverse(H_n)``.
"""
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ContractError, DimensionError, DivergenceError
from .maps import select
from .spectral import dft2, idft2
from .transform import _analysis_sum, bandlimit, forward

STOP_MAX_ITERS = "max_iters"
STOP_TOL_DELTA = "tol_delta"
STOP_STALL = "stall"

# Window over which tol_stall is measured.
STALL_WINDOW = 100


@dataclass(frozen=True)
class IterationConfig:
    """Stopping and telemetry settings.

    ``tol_delta`` (percent) stops once a recorded delta falls to or below it.
    ``tol_stall`` stops when the step size ``||F_n - F_{n-1}||`` has decreased
    by less than this relative amount over the last 100 iterations.
    Both are off by default, so a run performs exactly ``max_iters`` steps.
    """

    max_iters: int = 1000
    tol_delta: float | None = None
    tol_stall: float | None = None
    record_every: int = 1

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass
class RunReport:
    """Telemetry of one reconstruction run.

    ``iters`` lists the recorded iteration numbers; ``residual`` holds
    ``||F_n - F_{n-1}|| / ||F0||`` at those iterations. ``delta`` (against the
    bandlimited source) and ``delta_raw`` (against the unprocessed source) are
    empty when the run started from coefficients alone.
    """

    iters: np.ndarray
    residual: np.ndarray
    delta: np.ndarray
    delta_raw: np.ndarray
    stop_reason: str
    n_iter: int
    first_image: np.ndarray
    final_image: np.ndarray
    max_imag: float
    has_truth: bool = field(default=False)

    @property
    def deltas(self):
        """``(n, delta_n)`` pairs."""
        return list(zip(self.iters.tolist(), self.delta.tolist()))

    @property
    def final_delta(self):
        return float(self.delta[-1]) if self.has_truth else float("nan")


class DecayFit(NamedTuple):
    slope: float
    r2: float


def delta_error(f, g):
    """Percent error ``100 ||f - Re g|| / (255 N)`` between two ``N x N`` images."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape or f.ndim != 2:
        raise DimensionError(f"delta_error of shapes {f.shape} and {g.shape}")
    return 100.0 * np.linalg.norm(np.real(f) - np.real(g)) / (255.0 * f.shape[0])


def _check_observed(F0, fmap):
    if np.shape(F0) != (fmap.m, fmap.n, fmap.n):
        raise DimensionError(f"stack shape {np.shape(F0)} does not match map (m, n, n)={(fmap.m, fmap.n, fmap.n)}")
    if np.any(F0[~fmap.graph_mask()] != 0):
        raise ContractError("observed stack has nonzero entries off the feature-map graph")


def _step(F_prev, F0, system, graph):
    # Returns H_n, F_n and the spectrum of inverse(H_n); the latter equals
    # dual_mult * sum_l F_hat_{n-1} conj(psi_hat_l) because inverse(P F) = inverse(F).
    s = system.dual_mult * _analysis_sum(dft2(F_prev), system)
    H = idft2(s[None] * system.psi_hat)
    return H, np.where(graph, F0, H), s


def pr_step(F_prev, F0, system, fmap):
    """One project-and-replace step; returns ``(H, F_next)``."""
    if np.shape(F_prev) != np.shape(F0):
        raise DimensionError(f"F_prev shape {np.shape(F_prev)} differs from F0 shape {np.shape(F0)}")
    _check_observed(F0, fmap)
    H, F_next, _ = _step(F_prev, F0, system, fmap.graph_mask())
    return H, F_next


def iterate(F0, system, fmap):
    """Yield ``(n, H_n, F_n)`` for ``n = 1, 2, ...`` indefinitely."""
    _check_observed(F0, fmap)
    graph = fmap.graph_mask()
    F = F0
    n = 0
    while True:
        n += 1
        H, F, _ = _step(F, F0, system, graph)
        yield n, H, F


def observe(f, system, fmap):
    """Observed coefficients ``select(forward(f), fmap)``."""
    return select(forward(f, system), fmap)


def reconstruct(source, system, fmap, config=None, callback=None):
    """Run the project-and-replace iteration.

    Parameters
    ----------
    source : ndarray
        Either an ``(n, n)`` image, which is bandlimited and then observed on
        the map (so delta telemetry is available), or an ``(m, n, n)`` stack
        of observed coefficients supported on the map's graph.
    system : WaveletSystem
    fmap : FeatureMap
    config : IterationConfig, optional
    callback : callable, optional
        Called as ``callback(n, H_n, F_n)`` after every step.

    Returns
    -------
    RunReport
    """
    config = config or IterationConfig()
    source = np.asarray(source)
    if source.ndim == 2:
        raw = np.real(source).astype(float)
        truth = np.real(bandlimit(raw, system))
        F0 = observe(truth, system, fmap)
    elif source.ndim == 3:
        raw = truth = None
        F0 = source.astype(complex)
        _check_observed(F0, fmap)
    else:
        raise DimensionError(f"source must be an image or a coefficient stack, got shape {source.shape}")

    graph = fmap.graph_mask()
    norm0 = np.linalg.norm(F0)
    iters, residual, delta, delta_raw = [], [], [], []
    recent = deque(maxlen=STALL_WINDOW + 1)
    first_image = None
    stop_reason = STOP_MAX_ITERS
    F = F0
    for n in range(1, config.max_iters + 1):
        H, F_next, img_hat = _step(F, F0, system, graph)
        step = np.linalg.norm(F_next - F)
        if not np.isfinite(step):
            raise DivergenceError(f"non-finite coefficients at iteration {n}")
        F = F_next
        if callback is not None:
            callback(n, H, F)
        res = step / norm0 if norm0 > 0 else 0.0
        recent.append(res)

        stop = None
        if (config.tol_stall is not None and len(recent) == recent.maxlen
                and recent[-1] > (1.0 - config.tol_stall) * recent[0]):
            stop = STOP_STALL
        due = n == 1 or n % config.record_every == 0 or n == config.max_iters or stop is not None
        if due:
            image = idft2(img_hat)
            if n == 1:
                first_image = image
            iters.append(n)
            residual.append(res)
            if truth is not None:
                d = delta_error(truth, image)
                delta.append(d)
                delta_raw.append(delta_error(raw, image))
                if stop is None and config.tol_delta is not None and d <= config.tol_delta:
                    stop = STOP_TOL_DELTA
        if stop is not None:
            stop_reason = stop
            break
    final_image = idft2(img_hat)

    return RunReport(
        iters=np.asarray(iters),
        residual=np.asarray(residual),
        delta=np.asarray(delta),
        delta_raw=np.asarray(delta_raw),
        stop_reason=stop_reason,
        n_iter=n,
        first_image=np.real(first_image),
        final_image=np.real(final_image),
        max_imag=float(np.abs(final_image.imag).max()),
        has_truth=truth is not None,
    )


def fit_decay_rate(deltas, tail=0.25):
    """Least-squares slope of ``log10(delta)`` per iteration over the trailing window.

    ``deltas`` is either a 1-D sequence (iterations 1, 2, ...) or ``(n, delta)``
    pairs. Returns ``DecayFit(slope, r2)``; a zero inside the window means the
    iteration converged exactly and yields ``slope=-inf``.
    """
    arr = np.asarray(deltas, dtype=float)
    if arr.ndim == 2:
        x, y = arr[:, 0], arr[:, 1]
    else:
        x, y = np.arange(1, len(arr) + 1, dtype=float), arr
    if len(y) < 20:
        raise ValueError(f"need at least 20 samples to fit a decay rate, got {len(y)}")
    k = max(2, int(np.ceil(tail * len(y))))
    x, y = x[-k:], y[-k:]
    if np.any(y == 0):
        return DecayFit(float("-inf"), 1.0)
    ly = np.log10(y)
    slope, intercept = np.polyfit(x, ly, 1)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    ss_res = np.sum((ly - (slope * x + intercept)) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(float(slope), float(r2))
