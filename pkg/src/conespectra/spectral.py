"""Eigenvalues of symmetric matrices through the cone fixed-point
engine, with no classical eigensolver anywhere in the pipeline.

Primary path: restrict the map f -> u^2 f to the space V of symmetric
matrices commuting with u (which always contains the identity), find a
positive semidefinite fixed direction of that map inside V, and read off
lambda; then u^2 - lambda id is singular, so one of +-sqrt(lambda) is an
eigenvalue of u, decided by which shifted matrix is more singular.

Alternative path: the same argument run on the cone of semidefinite
forms for which u is selfadjoint with respect to a supplied metric, with
the congruence action S -> u^T S u. Both paths produce the same kind of
certificate; they need not select the same eigenvalue.

Full diagonalization is deflation: certify one eigenvalue, extract its
eigenspace, restrict to the orthogonal complement, repeat.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import ConeHandle, birkhoff_eigenvector
from .errors import NonConvergence, NotSelfadjoint
from .linalg import (
    EPS,
    cholesky,
    kernel_basis,
    max_abs,
    min_singular_value,
    orthonormalize_columns,
    require_square,
    require_symmetric,
    sym_coord_dim,
    sym_to_vec,
    symmetrize,
    vec_to_sym,
)

__all__ = [
    "CommutantBasis",
    "SpectralCertificate",
    "commutant_selfadjoint_basis",
    "spectral_eigenvalue",
    "invariant_form_path",
    "eigen_decomposition",
]

_KERNEL_LADDER = (1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)


@dataclass(frozen=True)
class CommutantBasis:
    """Orthonormal basis (trace inner product) of the symmetric matrices
    commuting with a given symmetric matrix; coords holds the same basis
    as columns in symmetric coordinates."""

    dim: int
    matrices: tuple[np.ndarray, ...]
    coords: np.ndarray


@dataclass(frozen=True)
class SpectralCertificate:
    """One certified eigenvalue.

    lambda_sq is the cone eigenvalue of the squared map; eigenvalue is
    the selected square root; witness_form is the semidefinite fixed
    direction; sigma_min_minus / sigma_min_plus witness the singularity
    of the shifted matrices at +sqrt / -sqrt; ambiguous_sign marks the
    case where both shifts are singular (both signs are eigenvalues, the
    positive root is returned by convention). radical_residual, when
    set, bounds || S (u^2 - lambda id) || relative to its factors: the
    range of the shifted square sits inside the witness form's kernel.
    """

    lambda_sq: float
    eigenvalue: float
    witness_form: np.ndarray
    sigma_min_minus: float
    sigma_min_plus: float
    ambiguous_sign: bool
    residual: float
    iterations: int
    radical_residual: float | None = None

    def to_json_dict(self) -> dict:
        out = {
            "eigenvalue": float(self.eigenvalue),
            "lambda_sq": float(self.lambda_sq),
            "sigma_min_minus": float(self.sigma_min_minus),
            "sigma_min_plus": float(self.sigma_min_plus),
            "ambiguous_sign": bool(self.ambiguous_sign),
            "residual": float(self.residual),
            "iterations": int(self.iterations),
            "witness_form": np.asarray(self.witness_form).tolist(),
        }
        if self.radical_residual is not None:
            out["radical_residual"] = float(self.radical_residual)
        return out


def _antisym_coords(A: np.ndarray) -> np.ndarray:
    d = A.shape[0]
    return np.array([A[i, j] for i in range(d) for j in range(i + 1, d)])


def _sym_solution_space(build_column, d: int, tol: float) -> np.ndarray:
    """Kernel, in symmetric coordinates, of a linear map from symmetric
    to antisymmetric matrices given columnwise by build_column."""
    n = sym_coord_dim(d)
    m = d * (d - 1) // 2
    K = np.zeros((max(m, 1), n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        A = build_column(vec_to_sym(e))
        if m > 0:
            K[:, k] = _antisym_coords(A)
    return kernel_basis(K, tol)


def commutant_selfadjoint_basis(u, tol: float = 1e-10) -> CommutantBasis:
    """Orthonormal basis of {f symmetric : fu = uf}. Never empty: the
    identity always commutes. Near-degenerate spectra of u inflate this
    space; that is harmless downstream, the cone argument works in any
    commutant-containing subspace."""
    u = require_symmetric(u)
    d = u.shape[0]
    coords = _sym_solution_space(lambda E: E @ u - u @ E, d, tol)
    mats = tuple(vec_to_sym(coords[:, j]) for j in range(coords.shape[1]))
    return CommutantBasis(d, mats, coords)


def _subspace_psd_handle(Bc: np.ndarray, d: int) -> ConeHandle:
    # the semidefinite cone intersected with the subspace spanned by the
    # orthonormal coordinate columns Bc, sliced at trace one
    traces = np.array([float(np.trace(vec_to_sym(Bc[:, j]))) for j in range(Bc.shape[1])])

    def membership(c: np.ndarray, tol: float) -> bool:
        f = vec_to_sym(Bc @ c)
        scale = max(1.0, max_abs(f))
        shift = (tol + 20.0 * d * EPS) * scale
        try:
            cholesky(f + shift * np.eye(d), tol=0.0)
        except Exception:
            return False
        return True

    def project(c: np.ndarray) -> np.ndarray:
        tr = float(traces @ c)
        if tr <= 0.0:
            raise NonConvergence("iterate lost positive trace inside the subspace cone", 0, float("nan"))
        return c / tr

    seed = Bc.T @ sym_to_vec(np.eye(d) / d)
    return ConeHandle(Bc.shape[1], membership, project, seed)


def _restricted_map(Bc: np.ndarray, image_of) -> np.ndarray:
    r = Bc.shape[1]
    T = np.empty((r, r))
    for j in range(r):
        f = vec_to_sym(Bc[:, j])
        T[:, j] = Bc.T @ sym_to_vec(symmetrize(image_of(f)))
    return T


def _sign_from_shifts(u: np.ndarray, lam: float, sing_tol: float) -> tuple[float, float, float, bool]:
    s = float(np.sqrt(lam))
    I = np.eye(u.shape[0])
    sm = min_singular_value(u - s * I)
    sp = min_singular_value(u + s * I)
    mu = s if sm <= sp else -s
    ambiguous = sm <= sing_tol and sp <= sing_tol
    return mu, sm, sp, ambiguous


def spectral_eigenvalue(
    u,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    perturb_seed: int | None = None,
) -> SpectralCertificate:
    """One certified eigenvalue of a symmetric matrix via the commutant
    cone fixed point."""
    u = require_symmetric(u)
    d = u.shape[0]
    basis = commutant_selfadjoint_basis(u)
    Bc = basis.coords
    u2 = u @ u
    T = _restricted_map(Bc, lambda f: u2 @ f)
    fp = birkhoff_eigenvector(T, _subspace_psd_handle(Bc, d), tol=tol, max_iter=max_iter, perturb_seed=perturb_seed)
    f = symmetrize(vec_to_sym(Bc @ np.asarray(fp.vector)))
    f = f / float(np.trace(f))
    lam = float(fp.eigenvalue)
    residual = float(np.linalg.norm(u2 @ f - lam * f)) / float(np.linalg.norm(f))
    if lam <= tol:
        s0 = min_singular_value(u)
        return SpectralCertificate(max(lam, 0.0), 0.0, f, s0, s0, False, residual, fp.iterations)
    sing_tol = 1e-6 * (1.0 + max_abs(u))
    mu, sm, sp, ambiguous = _sign_from_shifts(u, lam, sing_tol)
    return SpectralCertificate(lam, mu, f, sm, sp, ambiguous, residual, fp.iterations)


def invariant_form_path(
    u,
    metric,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    perturb_seed: int | None = None,
) -> SpectralCertificate:
    """Same certificate, computed on the cone of semidefinite forms that
    make u selfadjoint, under the congruence action S -> u^T S u.

    The certificate additionally documents the kernel inclusion: the
    converged form annihilates the range of u^2 - lambda id, reported as
    radical_residual.
    """
    u = require_square(u)
    M = require_symmetric(metric)
    scale = max(1.0, max_abs(M)) * max(1.0, max_abs(u))
    if max_abs(M @ u - u.T @ M) > 1e-8 * scale:
        raise NotSelfadjoint("the operator is not selfadjoint for the supplied metric")
    cholesky(M)  # positive definiteness of the metric
    d = u.shape[0]
    Wc = _sym_solution_space(lambda S: S @ u - u.T @ S, d, 1e-10)
    handle = _subspace_psd_handle(Wc, d)
    seed_override = Wc.T @ sym_to_vec(M / float(np.trace(M)))
    handle = ConeHandle(handle.space_dim, handle.membership, handle.project_or_normalize, seed_override)
    T = _restricted_map(Wc, lambda S: u.T @ S @ u)
    fp = birkhoff_eigenvector(T, handle, tol=tol, max_iter=max_iter, perturb_seed=perturb_seed)
    S = symmetrize(vec_to_sym(Wc @ np.asarray(fp.vector)))
    S = S / float(np.trace(S))
    lam = float(fp.eigenvalue)
    residual = float(np.linalg.norm(u.T @ S @ u - lam * S)) / float(np.linalg.norm(S))
    R = u @ u - lam * np.eye(d)
    radical = max_abs(S @ R) / (max(1e-300, max_abs(S)) * max(1.0, max_abs(R)))
    if lam <= tol:
        s0 = min_singular_value(u)
        return SpectralCertificate(max(lam, 0.0), 0.0, S, s0, s0, False, residual, fp.iterations, radical)
    sing_tol = 1e-6 * (1.0 + max_abs(u))
    mu, sm, sp, ambiguous = _sign_from_shifts(u, lam, sing_tol)
    return SpectralCertificate(lam, mu, S, sm, sp, ambiguous, residual, fp.iterations, radical)


def eigen_decomposition(
    u,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of a symmetric matrix by certified deflation.

    Each round certifies one eigenvalue of the restriction to the
    current complement, takes the whole numerical eigenspace there, and
    restricts further. Returns (eigenvalues, Q) with orthonormal columns
    in extraction order."""
    u = require_symmetric(u)
    d = u.shape[0]
    Qc = np.eye(d)
    evals: list[float] = []
    blocks: list[np.ndarray] = []
    remaining = d
    while remaining > 0:
        ur = symmetrize(Qc.T @ u @ Qc)
        cert = spectral_eigenvalue(ur, tol=tol, max_iter=max_iter)
        mu = cert.eigenvalue
        scale = max(1.0, max_abs(ur))
        W = np.zeros((remaining, 0))
        for ktol in _KERNEL_LADDER:
            W = kernel_basis(ur - mu * np.eye(remaining), ktol * scale)
            if W.shape[1] > 0:
                break
        if W.shape[1] == 0:
            raise NonConvergence(
                f"no eigenvector found at certified eigenvalue {mu:.6g}", cert.iterations, cert.residual
            )
        k = W.shape[1]
        blocks.append(Qc @ W)
        evals.extend([mu] * k)
        if k == remaining:
            break
        Z = kernel_basis(W.T, 1e-12)
        Qc = Qc @ Z
        remaining -= k
    Q = orthonormalize_columns(np.column_stack(blocks))
    return np.array(evals), Q
