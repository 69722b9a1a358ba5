"""Dense real linear algebra primitives.

Everything here is hand-rolled on top of numpy array arithmetic: LU with
partial pivoting, column-pivoted Householder QR, nonnegative least
squares, Cholesky, a safeguarded smallest-singular-value iteration, and
the Faddeev-LeVerrier characteristic polynomial. Tolerances are explicit
parameters with documented defaults; there is no hidden global state,
and every function is pure.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DimensionTooLarge,
    InconsistentDimension,
    NotPositiveDefinite,
    NotSelfadjoint,
    SingularMatrix,
)
from .polynomial import Polynomial

__all__ = [
    "EPS",
    "max_abs",
    "inf_norm",
    "require_square",
    "require_symmetric",
    "symmetrize",
    "LUFactors",
    "lu_factor",
    "lu_solve",
    "solve_linear",
    "solve_triangular",
    "qr_column_pivot",
    "kernel_basis",
    "lstsq_basic",
    "orthonormalize_columns",
    "nnls",
    "cholesky",
    "min_singular_value",
    "char_poly",
    "sym_to_vec",
    "vec_to_sym",
    "sym_vec_trace",
    "sym_coord_dim",
]

EPS = float(np.finfo(float).eps)

_SQRT2 = float(np.sqrt(2.0))


def max_abs(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def inf_norm(A) -> float:
    """Operator infinity norm (max absolute row sum) of a 2-d array."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(A), axis=1)))


def require_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InconsistentDimension(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InconsistentDimension("matrix entries must be finite")
    return A


def require_symmetric(A, rel_tol: float = 1e-8) -> np.ndarray:
    """Validate approximate symmetry and return the exactly symmetrized matrix."""
    A = require_square(A)
    scale = max(1.0, max_abs(A))
    if max_abs(A - A.T) > rel_tol * scale:
        raise NotSelfadjoint(f"matrix is not symmetric (asymmetry {max_abs(A - A.T):.3e})")
    return symmetrize(A)


def symmetrize(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + A.T)


class LUFactors(NamedTuple):
    lu: np.ndarray
    perm: np.ndarray


def lu_factor(A, tol: float | None = None) -> LUFactors:
    """Partial-pivot LU. Raises SingularMatrix when a pivot falls at or
    below the threshold, which defaults to dim * eps * ||A||_inf."""
    A = require_square(A)
    n = A.shape[0]
    if tol is None:
        tol = n * EPS * inf_norm(A)
    lu = A.copy()
    perm = np.arange(n)
    for k in range(n):
        i = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[i, k]) <= tol:
            raise SingularMatrix(f"pivot {lu[i, k]:.3e} at column {k} is below {tol:.3e}")
        if i != k:
            lu[[k, i]] = lu[[i, k]]
            perm[[k, i]] = perm[[i, k]]
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return LUFactors(lu, perm)


def lu_solve(factors: LUFactors, b) -> np.ndarray:
    lu, perm = factors
    n = lu.shape[0]
    b = np.asarray(b, dtype=float)
    if b.shape[0] != n:
        raise InconsistentDimension(f"right-hand side has length {b.shape[0]}, expected {n}")
    x = b[perm].astype(float)
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1 :] @ x[k + 1 :]) / lu[k, k]
    return x


def solve_linear(A, b, tol: float | None = None) -> np.ndarray:
    """Solve Ax = b by partial-pivot LU."""
    return lu_solve(lu_factor(A, tol), b)


def solve_triangular(L, B, lower: bool = True) -> np.ndarray:
    """Solve L X = B for triangular L; B may be a vector or a matrix."""
    L = require_square(L)
    n = L.shape[0]
    B = np.asarray(B, dtype=float)
    X = B.copy().reshape(n, -1) if B.ndim > 1 else B.copy().reshape(n, 1)
    rows = range(n) if lower else range(n - 1, -1, -1)
    for i in rows:
        if lower:
            X[i] -= L[i, :i] @ X[:i]
        else:
            X[i] -= L[i, i + 1 :] @ X[i + 1 :]
        if L[i, i] == 0.0:
            raise SingularMatrix(f"zero diagonal at {i} in triangular solve")
        X[i] /= L[i, i]
    return X.reshape(B.shape)


def qr_column_pivot(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Householder QR with column pivoting: A[:, perm] = Q @ R.

    The pivot at each step is the remaining column of largest Euclidean
    norm (lowest index on ties), with norms recomputed from scratch for
    stability at desk scale.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    R = A.copy()
    Q = np.eye(m)
    perm = np.arange(n)
    for k in range(min(m, n)):
        norms = np.sqrt(np.sum(R[k:, k:] ** 2, axis=0))
        j = k + int(np.argmax(norms))
        if j != k:
            R[:, [k, j]] = R[:, [j, k]]
            perm[[k, j]] = perm[[j, k]]
        x = R[k:, k]
        nx = float(np.linalg.norm(x))
        if nx == 0.0:
            continue
        v = x.copy()
        v[0] += nx if v[0] >= 0 else -nx
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            continue
        v /= nv
        R[k:, k:] -= 2.0 * np.outer(v, v @ R[k:, k:])
        Q[:, k:] -= 2.0 * np.outer(Q[:, k:] @ v, v)
        R[k + 1 :, k] = 0.0
    return Q, R, perm


def _numerical_rank(R: np.ndarray, tol: float) -> int:
    d = np.abs(np.diag(R[: min(R.shape), : min(R.shape)]))
    if d.size == 0:
        return 0
    thr = tol * max(1.0, float(d.max()))
    r = 0
    while r < d.size and d[r] > thr:
        r += 1
    return r


def kernel_basis(A, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the numerical null space, as columns.

    Uses the complete orthogonal decomposition built on column-pivoted
    QR; the rank cut is at tol relative to the largest R diagonal (with
    an absolute floor of 1). Accepts rectangular input; an empty basis
    is the (n, 0) array.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    _, R, perm = qr_column_pivot(A)
    r = _numerical_rank(R, tol)
    if r == n:
        return np.zeros((n, 0))
    N = np.zeros((n, n - r))
    if r > 0:
        W = solve_triangular(R[:r, :r], -R[:r, r:n], lower=False)
        N[perm[:r]] = W.reshape(r, n - r)
    N[perm[r:n]] = np.eye(n - r)
    return orthonormalize_columns(N)


def lstsq_basic(A, b, tol: float = 1e-12) -> np.ndarray:
    """Least-squares solution with zeros on numerically dependent
    columns (a basic solution from the rank-revealing QR)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    b = np.asarray(b, dtype=float)
    Q, R, perm = qr_column_pivot(A)
    r = _numerical_rank(R, tol)
    x = np.zeros(n)
    if r > 0:
        qb = Q.T @ b
        x[perm[:r]] = solve_triangular(R[:r, :r], qb[:r], lower=False)
    return x


def orthonormalize_columns(V, tol: float = 1e-12) -> np.ndarray:
    """Modified Gram-Schmidt, applied twice; columns that collapse below
    tol are dropped."""
    V = np.atleast_2d(np.asarray(V, dtype=float))
    out: list[np.ndarray] = []
    for j in range(V.shape[1]):
        v = V[:, j].copy()
        for _ in range(2):
            for q in out:
                v -= (q @ v) * q
        nv = float(np.linalg.norm(v))
        if nv > tol:
            out.append(v / nv)
    if not out:
        return np.zeros((V.shape[0], 0))
    return np.column_stack(out)


def nnls(A, b, grad_tol: float | None = None, max_iter: int | None = None) -> np.ndarray:
    """Nonnegative least squares min ||Ax - b|| s.t. x >= 0 by the
    active-set method. Ties in the entering variable break to the lowest
    index, so the output is reproducible."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if grad_tol is None:
        grad_tol = 100.0 * max(m, n) * EPS * max(1.0, max_abs(A)) * max(1.0, max_abs(b))
    if max_iter is None:
        max_iter = 50 + 10 * n
    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    w = A.T @ (b - A @ x)
    for _ in range(max_iter):
        if passive.all():
            break
        w_free = np.where(passive, -np.inf, w)
        j = int(np.argmax(w_free))
        if w_free[j] <= grad_tol:
            break
        passive[j] = True
        while True:
            cols = np.flatnonzero(passive)
            z = np.zeros(n)
            z[cols] = lstsq_basic(A[:, cols], b)
            if np.all(z[cols] > 0.0):
                x = z
                break
            bad = passive & (z <= 0.0)
            denom = x - z
            steps = np.where(bad & (denom > 1e-300), x / np.where(denom > 1e-300, denom, 1.0), np.inf)
            alpha = float(np.min(steps))
            if not np.isfinite(alpha):
                # degenerate entering column; drop it and give up on this pass
                passive[j] = False
                x[~passive] = 0.0
                break
            x = x + alpha * (z - x)
            passive &= x > 1e-14 * max(1.0, float(np.max(np.abs(x), initial=0.0)))
            x[~passive] = 0.0
        w = A.T @ (b - A @ x)
    return x


def cholesky(S, tol: float | None = None) -> np.ndarray:
    """Lower-triangular L with L L^T = S for positive definite S.
    A pivot at or below tol (default dim * eps * ||S||_inf) raises."""
    S = symmetrize(require_square(S))
    n = S.shape[0]
    if tol is None:
        tol = n * EPS * inf_norm(S)
    L = np.zeros_like(S)
    for j in range(n):
        d = S[j, j] - L[j, :j] @ L[j, :j]
        if d <= tol:
            raise NotPositiveDefinite(f"pivot {d:.3e} at row {j} is not above {tol:.3e}")
        L[j, j] = np.sqrt(d)
        if j + 1 < n:
            L[j + 1 :, j] = (S[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def min_singular_value(A, rel_tol: float = 1e-8, max_iter: int = 400) -> float:
    """Smallest singular value via safeguarded inverse iteration on A^T A.

    A fixed-seed random start vector avoids accidental orthogonality to
    the minimal direction; a final Rayleigh-shift polish accepts only
    non-increasing Rayleigh quotients, so it cannot jump to a larger
    eigenvalue of A^T A.
    """
    A = require_square(A)
    n = A.shape[0]
    M = symmetrize(A.T @ A)
    scale = max(1.0, max_abs(M))
    delta = 100.0 * n * EPS * scale
    rng = np.random.default_rng(0x5EED)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    rho = float(x @ M @ x)
    try:
        base = lu_factor(M + delta * np.eye(n))
    except SingularMatrix:
        base = None
    if base is not None:
        for _ in range(max_iter):
            y = lu_solve(base, x)
            ny = float(np.linalg.norm(y))
            if ny == 0.0 or not np.isfinite(ny):
                break
            y /= ny
            rho_new = float(y @ M @ y)
            done = abs(rho_new - rho) <= 0.01 * rel_tol * max(abs(rho_new), delta)
            x, rho = y, rho_new
            if done:
                break
    for _ in range(3):
        try:
            shifted = lu_factor(M - rho * np.eye(n))
        except SingularMatrix:
            break
        z = lu_solve(shifted, x)
        nz = float(np.linalg.norm(z))
        if nz == 0.0 or not np.all(np.isfinite(z)):
            break
        z /= nz
        rho_z = float(z @ M @ z)
        if rho_z <= rho * (1.0 + 1e-9) + delta:
            x, rho = z, rho_z
        else:
            break
    return float(np.sqrt(max(rho, 0.0)))


def _kahan_trace(M: np.ndarray) -> float:
    s = 0.0
    c = 0.0
    for i in range(M.shape[0]):
        y = float(M[i, i]) - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


def char_poly(A) -> Polynomial:
    """Characteristic polynomial det(tI - A), monic, by the
    Faddeev-LeVerrier recurrence with compensated trace sums."""
    A = require_square(A)
    n = A.shape[0]
    if n > 64:
        raise DimensionTooLarge(f"characteristic polynomial limited to dim 64, got {n}")
    c = np.zeros(n + 1)
    c[n] = 1.0
    M = A.copy()
    c[n - 1] = -_kahan_trace(M)
    I = np.eye(n)
    for k in range(2, n + 1):
        M = A @ (M + c[n - k + 1] * I)
        c[n - k] = -_kahan_trace(M) / k
    return Polynomial(c)


def sym_coord_dim(d: int) -> int:
    return d * (d + 1) // 2


@lru_cache(maxsize=None)
def _sym_indices(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # row-major upper-triangle coordinates and the off-diagonal mask
    rows, cols = np.triu_indices(d)
    return rows, cols, rows != cols


def sym_to_vec(S) -> np.ndarray:
    """Coordinates of a symmetric matrix in the orthonormal basis of the
    symmetric space: diagonal entries as-is, off-diagonals scaled by
    sqrt(2), so the Euclidean inner product of coordinate vectors equals
    the trace (Frobenius) inner product of the matrices."""
    S = np.asarray(S, dtype=float)
    rows, cols, off = _sym_indices(S.shape[0])
    out = S[rows, cols].copy()
    out[off] *= _SQRT2
    return out


def vec_to_sym(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = v.shape[0]
    d = int(round((np.sqrt(8.0 * n + 1.0) - 1.0) / 2.0))
    if sym_coord_dim(d) != n:
        raise InconsistentDimension(f"length {n} is not a symmetric coordinate dimension")
    rows, cols, off = _sym_indices(d)
    vals = v.copy()
    vals[off] /= _SQRT2
    S = np.zeros((d, d))
    S[rows, cols] = vals
    S[cols, rows] = vals
    return S


def sym_vec_trace(v) -> float:
    """Trace of the symmetric matrix encoded by the coordinate vector,
    read off the diagonal positions without rebuilding the matrix."""
    v = np.asarray(v, dtype=float)
    n = v.shape[0]
    d = int(round((np.sqrt(8.0 * n + 1.0) - 1.0) / 2.0))
    if sym_coord_dim(d) != n:
        raise InconsistentDimension(f"length {n} is not a symmetric coordinate dimension")
    rows, cols, off = _sym_indices(d)
    return float(v[~off].sum())
