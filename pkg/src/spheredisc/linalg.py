"""Dense symmetric eigensolvers and deterministic orthogonal-complement vectors.

Two eigen-backends are provided. ``sym_eig`` runs a cyclic Jacobi sweep
(or LAPACK ``syevd`` through numpy) and returns the full spectrum in
descending order. ``lowest_eigenpairs`` calls LAPACK's MRRR driver
``dsyevr`` for an index range only; the solver uses it every iteration
because it needs nothing but the bottom few eigenvectors.
"""

from __future__ import annotations

import ctypes
from dataclasses import dataclass

import numpy as np
from numba import njit
from numba.extending import get_cython_function_address
from scipy.linalg import cython_lapack

from .errors import DomainError, NoConvergence, NonSymmetric, TrivialComplement

RANK_TOL = 1e-8
SYMMETRY_TOL = 1e-12

_vp = ctypes.c_void_p
_dsyevr = ctypes.CFUNCTYPE(None, *([_vp] * 21))(
    get_cython_function_address(cython_lapack.__name__, "dsyevr")
)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order; ``eigenvectors[:, j]`` pairs with ``eigenvalues[j]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------


@njit(cache=True)
def _jacobi_kernel(M, tol, max_sweeps):
    n = M.shape[0]
    A = M.copy()
    V = np.eye(n)
    fro = np.sqrt(np.sum(A * A))
    target = tol * fro
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * A[p, q] * A[p, q]
        if np.sqrt(off) <= target:
            d = np.empty(n)
            for i in range(n):
                d[i] = A[i, i]
            return d, V, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    d = np.empty(n)
    for i in range(n):
        d[i] = A[i, i]
    return d, V, max_sweeps, False


@njit
def _bottom_eig(M, k):
    """Lowest ``k`` eigenpairs of symmetric ``M`` via dsyevr.

    Returns ascending eigenvalues and a (k, n) array whose rows are the
    eigenvectors, plus the LAPACK info code.
    """
    n = M.shape[0]
    A = M.copy()
    W = np.empty(n)
    Z = np.empty((n, n))
    isuppz = np.empty(2 * n, dtype=np.int32)
    work = np.empty(32 * n + 64)
    iwork = np.empty(12 * n + 16, dtype=np.int32)
    ib = np.empty(9, dtype=np.int32)
    fb = np.zeros(3)
    jobz = np.array([ord("V")], dtype=np.uint8)
    rng = np.array([ord("I")], dtype=np.uint8)
    uplo = np.array([ord("L")], dtype=np.uint8)
    ib[0] = n
    ib[1] = n
    ib[2] = 1
    ib[3] = k
    ib[4] = 0
    ib[5] = n
    ib[6] = work.shape[0]
    ib[7] = iwork.shape[0]
    ib[8] = 0
    _dsyevr(
        jobz.ctypes, rng.ctypes, uplo.ctypes, ib[0:].ctypes, A.ctypes, ib[1:].ctypes,
        fb[0:].ctypes, fb[1:].ctypes, ib[2:].ctypes, ib[3:].ctypes, fb[2:].ctypes,
        ib[4:].ctypes, W.ctypes, Z.ctypes, ib[5:].ctypes, isuppz.ctypes,
        work.ctypes, ib[6:].ctypes, iwork.ctypes, ib[7:].ctypes, ib[8:].ctypes,
    )
    # column-major output: eigenvector j is row j of the C-ordered buffer
    return W[:k].copy(), Z[:k].copy(), ib[8]


@njit(cache=True)
def _complement_kernel(B, C, tol):
    """Unit vector in span(rows of B) orthogonal to every row of C.

    ``B`` has orthonormal rows spanning the search subspace S. Each nonzero
    constraint is normalized, mapped to S-coordinates and orthonormalized
    (classical Gram-Schmidt, two passes). Probes e_1, e_2, ... are then
    projected off that basis; the first residual with norm > ``tol`` is
    normalized and returned. Status 1 means nothing survived.
    """
    d, n = B.shape
    r = C.shape[0]
    Q = np.zeros((d, d))
    k = 0
    a = np.empty(d)
    for i in range(r):
        if k == d:
            break
        nc = 0.0
        for j in range(n):
            nc += C[i, j] * C[i, j]
        nc = np.sqrt(nc)
        if not nc > 0.0:
            continue
        for p in range(d):
            s = 0.0
            for j in range(n):
                s += B[p, j] * C[i, j]
            a[p] = s / nc
        for _ in range(2):
            for q in range(k):
                s = 0.0
                for p in range(d):
                    s += Q[p, q] * a[p]
                for p in range(d):
                    a[p] -= s * Q[p, q]
        na = np.sqrt(np.sum(a * a))
        if na > tol:
            for p in range(d):
                Q[p, k] = a[p] / na
            k += 1
    y = np.zeros(n)
    if k == d:
        return y, -1, 1
    b = np.empty(d)
    for j in range(n):
        for p in range(d):
            b[p] = B[p, j]
        for _ in range(2):
            for q in range(k):
                s = 0.0
                for p in range(d):
                    s += Q[p, q] * b[p]
                for p in range(d):
                    b[p] -= s * Q[p, q]
        nb = np.sqrt(np.sum(b * b))
        if nb > tol:
            for p in range(d):
                b[p] /= nb
            for q in range(k):
                s = 0.0
                for p in range(d):
                    s += Q[p, q] * b[p]
                for p in range(d):
                    b[p] -= s * Q[p, q]
            nb = np.sqrt(np.sum(b * b))
            for p in range(d):
                b[p] /= nb
            for i in range(n):
                s = 0.0
                for p in range(d):
                    s += B[p, i] * b[p]
                y[i] = s
            ny = np.sqrt(np.sum(y * y))
            for i in range(n):
                y[i] /= ny
            return y, j, 0
    return y, -1, 1


# --------------------------------------------------------------------------
# public API
# --------------------------------------------------------------------------


def check_symmetric(M) -> np.ndarray:
    """Return ``M`` as a float array after finiteness and symmetry checks."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DomainError(f"expected a nonempty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError("matrix has non-finite entries")
    scale = np.max(np.abs(M))
    if np.max(np.abs(M - M.T)) > SYMMETRY_TOL * max(scale, np.finfo(float).tiny):
        raise NonSymmetric("matrix is not symmetric within 1e-12 relative")
    return M


def sym_eig(M, tau_eig: float = 1e-12, method: str = "jacobi", max_sweeps: int = 100) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    ``method="jacobi"`` runs cyclic Jacobi rotations until the off-diagonal
    Frobenius mass is at most ``tau_eig/2`` times ``||M||_F``, which bounds
    every residual ``||M u - mu u||`` by ``tau_eig * ||M||_F``.
    ``method="lapack"`` delegates to ``numpy.linalg.eigh``.
    Ties are broken by the backend's output order (stable sort).
    """
    M = check_symmetric(M)
    if not (0.0 < tau_eig <= 1e-6):
        raise DomainError("tau_eig must lie in (0, 1e-6]")
    if method == "jacobi":
        vals, vecs, sweeps, ok = _jacobi_kernel(np.ascontiguousarray(M), 0.5 * tau_eig, max_sweeps)
        if not ok:
            raise NoConvergence(f"Jacobi did not reach tolerance {tau_eig:g} in {max_sweeps} sweeps")
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(M)
        sweeps = 0
    else:
        raise DomainError(f"unknown method {method!r}")
    order = np.argsort(-vals, kind="stable")
    return EigenDecomposition(vals[order], np.ascontiguousarray(vecs[:, order]), sweeps)


def lowest_eigenpairs(M, k: int):
    """Lowest ``k`` eigenpairs (ascending) of a symmetric matrix via LAPACK dsyevr.

    Returns ``(values, vectors)`` with ``vectors[:, j]`` the j-th eigenvector.
    """
    M = check_symmetric(M)
    n = M.shape[0]
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}]")
    vals, rows, info = _bottom_eig(np.ascontiguousarray(M), k)
    if info != 0:
        raise NoConvergence(f"dsyevr failed with info={info}")
    return vals, rows.T.copy()


def complement_unit_vector(spanning, n: int | None = None) -> np.ndarray:
    """Deterministic unit vector orthogonal to every vector in ``spanning``.

    The spanning vectors are normalized and orthonormalized in order; zero
    and (numerically) dependent vectors are skipped. The first standard
    basis vector whose projection off that basis has norm above 1e-8 is
    normalized and returned. Its probe coordinate is positive.
    """
    if n is None:
        if len(spanning) == 0:
            raise DomainError("dimension unknown for an empty spanning list")
        n = len(spanning[0])
    C = np.asarray(spanning, dtype=float).reshape(-1, n)
    if not np.all(np.isfinite(C)):
        raise DomainError("spanning vectors must be finite")
    y, _, status = _complement_kernel(np.eye(n), np.ascontiguousarray(C), RANK_TOL)
    if status != 0:
        raise TrivialComplement(f"spanning set has full rank {n}")
    return y
