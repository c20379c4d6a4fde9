"""Dense brute-force reference for tiny instances.

Operators are materialized column by column by applying the fast path to
canonical basis stacks, flattened in C order of ``(m, n, n)``.
"""
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import ContractError, NotSolvableError, SizeGuardError
from .maps import select
from .transform import project

MAX_DIM = 4096
SOLVABLE_TOL = 1e-8
MARGINAL_HI = 1e-9
RANK_RTOL = 1e-6
PROJECTOR_TOL = 1e-8


@dataclass(frozen=True)
class SolvabilityCertificate:
    """Outcome of :func:`certify`.

    ``status`` is ``"solvable"`` when ``sigma < 1 - tol``, ``"marginal"``
    when ``sigma`` lies within rounding of 1, and ``"not solvable"`` above.
    """

    sigma: float
    status: str
    dim_ran_p: int
    dim_intersection: int
    tol: float = SOLVABLE_TOL
    expected_rank: int | None = None

    @property
    def solvable(self):
        return self.status == "solvable"

    def format(self):
        return "\n".join([
            f"sigma = ||(1-Q)P||  : {self.sigma:.12f}",
            f"status              : {self.status}",
            f"rank P              : {self.dim_ran_p}",
            f"dim Ker Q n Ran P   : {self.dim_intersection}",
        ] + ([] if self.expected_rank is None else [
            f"on-band frequencies : {self.expected_rank}"
            + ("" if self.expected_rank == self.dim_ran_p else "  (rank mismatch: Calderon underflow on band?)"),
        ]))


def materialize(op, n, m, max_dim=MAX_DIM):
    """Dense matrix of a linear operator on ``(m, n, n)`` stacks."""
    dim = n * n * m
    if dim > max_dim:
        raise SizeGuardError(f"dense operator of dimension {dim} exceeds the limit {max_dim} (n={n}, m={m})")
    out = np.empty((dim, dim), dtype=complex)
    e = np.zeros(dim, dtype=complex)
    for k in range(dim):
        e[k] = 1.0
        out[:, k] = np.asarray(op(e.reshape(m, n, n))).ravel()
        e[k] = 0.0
    return out


def projection_matrix(system, max_dim=MAX_DIM):
    return materialize(lambda F: project(F, system), system.n, system.m, max_dim)


def selection_matrix(fmap, max_dim=MAX_DIM):
    dim = fmap.n * fmap.n * fmap.m
    if dim > max_dim:
        raise SizeGuardError(f"dense operator of dimension {dim} exceeds the limit {max_dim}")
    # Q is diagonal; building it through select keeps it tied to the fast path.
    return np.diag(select(np.ones((fmap.m, fmap.n, fmap.n), dtype=complex), fmap).ravel())


def projector_defects(P):
    """``(||P^2 - P||, ||P - P^*||)`` in operator norm."""
    return (np.linalg.norm(P @ P - P, 2), np.linalg.norm(P - P.conj().T, 2))


def range_basis(P, rtol=RANK_RTOL):
    """Orthonormal basis of ``Ran(P)`` from its SVD."""
    u, sv, _ = np.linalg.svd(P)
    if sv.size == 0 or sv[0] == 0:
        return u[:, :0]
    return u[:, sv > rtol * sv[0]]


def certify(P, Q, tol=SOLVABLE_TOL):
    """Decide whether ``Ker Q n Ran P = {0}`` for two orthogonal projections."""
    P = np.asarray(P)
    Q = np.asarray(Q)
    if P.shape != Q.shape or P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ContractError(f"operators must be square of equal size, got {P.shape} and {Q.shape}")
    for name, op in (("P", P), ("Q", Q)):
        idem, herm = projector_defects(op)
        if idem > PROJECTOR_TOL or herm > PROJECTOR_TOL:
            raise ContractError(
                f"{name} is not an orthogonal projection (||X^2-X||={idem:.2e}, ||X-X*||={herm:.2e})")
    eye = np.eye(P.shape[0])
    sigma = float(np.linalg.norm((eye - Q) @ P, 2))
    basis = range_basis(P)
    qb = np.linalg.svd(Q @ basis, compute_uv=False) if basis.shape[1] else np.zeros(0)
    dim_int = int(np.sum(qb <= tol))
    if sigma < 1 - tol:
        status = "solvable"
    elif sigma <= 1 + MARGINAL_HI:
        status = "marginal"
    else:
        status = "not solvable"
    return SolvabilityCertificate(sigma=sigma, status=status, dim_ran_p=basis.shape[1],
                                  dim_intersection=dim_int, tol=tol)


def direct_solve(P, Q, F0, certificate=None):
    """Solve ``(1 - (1 - Q) P) F = F0`` by a dense LU factorization."""
    P = np.asarray(P)
    Q = np.asarray(Q)
    shape = np.shape(F0)
    f0 = np.asarray(F0, dtype=complex).ravel()
    certificate = certificate or certify(P, Q)
    if not certificate.solvable:
        raise NotSolvableError(f"system is not uniquely solvable (sigma={certificate.sigma:.12f})")
    if np.linalg.norm(Q @ f0 - f0) > 1e-12 * max(np.linalg.norm(f0), 1.0):
        raise ContractError("F0 is not in the range of Q")
    eye = np.eye(P.shape[0])
    A = eye - (eye - Q) @ P
    sol = scipy.linalg.solve(A, f0)
    return sol.reshape(shape)


def certify_instance(system, fmap, tol=SOLVABLE_TOL, max_dim=MAX_DIM):
    """Materialize ``P`` and ``Q`` for a system and map and certify them.

    Returns ``(certificate, P, Q)``.
    """
    P = projection_matrix(system, max_dim)
    Q = selection_matrix(fmap, max_dim)
    cert = replace(certify(P, Q, tol), expected_rank=int(system.mask.sum()))
    return cert, P, Q


@dataclass(frozen=True)
class IterationCrosscheck:
    """Fast iteration compared against :func:`direct_solve` on one instance.

    ``errors[k]`` is ``||F_true - F_{k+1}|| / ||F_true||``. ``slope`` is the
    fitted ``log10`` error decrease per iteration over the geometric regime
    (samples above ``floor``, trailing quarter).
    """

    steps: int
    rel_diff_direct: float
    errors: np.ndarray
    slope: float
    r2: float
    sigma: float

    @property
    def log10_sigma(self):
        return float(np.log10(self.sigma))


def iteration_crosscheck(system, fmap, P=None, Q=None, certificate=None, seed=0,
                         steps=None, floor=1e-12, max_steps=200_000):
    """Run the fast iteration on a random ``F_true = P G`` and compare with the dense solve.

    ``steps`` defaults to ``ceil(log(1e-8) / log(sigma))``.
    """
    from .reconstruction import fit_decay_rate, iterate

    if P is None or Q is None:
        certificate, P, Q = certify_instance(system, fmap)
    certificate = certificate or certify(P, Q)
    if not certificate.solvable:
        raise NotSolvableError(f"system is not uniquely solvable (sigma={certificate.sigma:.12f})")
    sigma = certificate.sigma
    if steps is None:
        steps = int(np.ceil(np.log(1e-8) / np.log(sigma))) if sigma > 0 else 1
    steps = min(max(steps, 1), max_steps)

    rng = np.random.default_rng(seed)
    shape = (system.m, system.n, system.n)
    G = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    F_true = project(G, system)
    F0 = select(F_true, fmap)
    F_direct = direct_solve(P, Q, F0, certificate)

    norm_true = np.linalg.norm(F_true)
    errors = np.empty(steps)
    for n, _, F in iterate(F0, system, fmap):
        errors[n - 1] = np.linalg.norm(F_true - F) / norm_true
        if n == steps:
            break
    rel_diff = float(np.linalg.norm(F - F_direct) / np.linalg.norm(F_direct))

    above = np.flatnonzero(errors > floor)
    if above.size >= 20:
        fit = fit_decay_rate(np.column_stack([above + 1, errors[above]]))
        slope, r2 = fit.slope, fit.r2
    else:
        slope = r2 = float("nan")
    return IterationCrosscheck(steps=steps, rel_diff_direct=rel_diff, errors=errors,
                               slope=slope, r2=r2, sigma=sigma)
