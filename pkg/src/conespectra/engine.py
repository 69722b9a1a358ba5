"""Cone-preserving fixed-point engine.

The core routine finds an eigenvector of a cone-preserving linear map
inside the cone by iterating the shifted map x -> x + T(x) on the cone's
canonical slice. The shift keeps iterates inside the cone even when T
annihilates cone vectors, and it makes the cone-dominant eigenvalue
dominant in modulus whenever T's spectrum on the cone is nonnegative, so
plain normalized iteration converges to a fixed ray whenever one
dominant ray exists. The eigenvalue is read off as the Rayleigh ratio at
the converged iterate.

Instantiations: the nonnegative orthant (with the classical min/max
ratio bracket reported alongside), and the positive semidefinite cone
acted on by congruence S -> u^T S u in symmetric coordinates. Arbitrary
cones plug in through ConeHandle.

Determinism: the default seeds are fixed (all-ones for the orthant,
identity/dim for the semidefinite cone) and nothing draws randomness
unless a perturbation seed is passed explicitly, so repeated runs are
bitwise identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import cones as _cones
from .errors import ConeSpectraError, InconsistentDimension, LeftCone, NegativeEntry, NonConvergence, NotInCone, NotParallel, SingularMatrix, SingularShift
from .linalg import (
    max_abs,
    require_square,
    solve_linear,
    sym_coord_dim,
    sym_to_vec,
    sym_vec_trace,
    symmetrize,
    vec_to_sym,
    EPS,
)

__all__ = [
    "ConeHandle",
    "ConeFixedPoint",
    "PerronResult",
    "orthant_handle",
    "psd_handle",
    "birkhoff_eigenvector",
    "perron_frobenius",
    "congruence_action",
    "psd_invariant_form",
    "extremal_decomposition_check",
]


@dataclass(frozen=True)
class ConeHandle:
    """A cone presented operationally.

    membership(x, tol) decides approximate cone membership;
    project_or_normalize maps any nonzero vector of the cone to the
    canonical representative of its ray on the cone's unit slice (it
    must depend on the ray only); interior_seed is a fixed starting
    point strictly inside the cone; perturb, when present, produces an
    alternative interior seed from an integer, for breaking adversarial
    ties.
    """

    space_dim: int
    membership: Callable[[np.ndarray, float], bool]
    project_or_normalize: Callable[[np.ndarray], np.ndarray]
    interior_seed: np.ndarray
    perturb: Callable[[int], np.ndarray] | None = None


@dataclass(frozen=True)
class ConeFixedPoint:
    """Certificate for an eigenvector found inside a cone: the slice
    representative, its nonnegative eigenvalue, the relative residual
    ||T(x) - lambda x|| / ||x||, and the iteration count."""

    vector: np.ndarray
    eigenvalue: float
    residual: float
    iterations: int

    def to_json_dict(self) -> dict:
        v = np.asarray(self.vector)
        return {
            "vector": v.tolist(),
            "eigenvalue": float(self.eigenvalue),
            "residual": float(self.residual),
            "iterations": int(self.iterations),
        }


@dataclass(frozen=True)
class PerronResult:
    """Orthant fixed point plus the min/max coordinate-ratio bracket,
    which sandwiches the dominant eigenvalue of a nonnegative matrix."""

    fixed_point: ConeFixedPoint
    bracket_lo: float
    bracket_hi: float

    def to_json_dict(self) -> dict:
        out = self.fixed_point.to_json_dict()
        out["bracket"] = [float(self.bracket_lo), float(self.bracket_hi)]
        return out


def orthant_handle(dim: int) -> ConeHandle:
    """The nonnegative orthant, sliced by the unit Euclidean sphere."""

    def membership(x: np.ndarray, tol: float) -> bool:
        return bool(np.min(x) >= -tol * max(1.0, max_abs(x)))

    def project(x: np.ndarray) -> np.ndarray:
        nx = float(np.linalg.norm(x))
        if nx == 0.0:
            raise LeftCone("zero vector cannot be normalized onto the slice")
        return x / nx

    def perturb(seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        return np.ones(dim) + 0.2 * rng.uniform(0.0, 1.0, dim)

    return ConeHandle(dim, membership, project, np.ones(dim) / np.sqrt(dim), perturb)


def psd_handle(dim: int) -> ConeHandle:
    """The positive semidefinite cone in symmetric coordinates, sliced
    at trace one. Membership is a shifted Cholesky test, so no
    eigenvalue machinery is involved."""
    n = sym_coord_dim(dim)

    eye = np.eye(dim)

    def membership(x: np.ndarray, tol: float) -> bool:
        f = vec_to_sym(x)
        scale = max(1.0, max_abs(f))
        shift = (tol + 20.0 * dim * EPS) * scale
        try:
            np.linalg.cholesky(f + shift * eye)
        except np.linalg.LinAlgError:
            return False
        return True

    def project(x: np.ndarray) -> np.ndarray:
        tr = sym_vec_trace(x)
        if tr <= 0.0:
            raise LeftCone("iterate lost positive trace")
        return x / tr

    def perturb(seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((dim, dim))
        bump = g @ g.T
        bump /= max(1.0, max_abs(bump))
        return sym_to_vec(np.eye(dim) / dim + 0.05 * bump)

    return ConeHandle(n, membership, project, sym_to_vec(np.eye(dim) / dim), perturb)


def _as_operator(T, dim: int) -> Callable[[np.ndarray], np.ndarray]:
    if callable(T):
        return T
    M = require_square(T)
    if M.shape[0] != dim:
        raise InconsistentDimension(f"operator dim {M.shape[0]} does not match cone dim {dim}")
    return lambda x: M @ x


_WARMUP_STEPS = 100
_MAX_SQUARINGS = 40
_MAX_POLISHES = 8


def _inverse_polish(M: np.ndarray, x: np.ndarray, lam: float, tol: float) -> np.ndarray | None:
    # shifted inverse-iteration solves against the original matrix with
    # Rayleigh-quotient shift updates. The iterate comes in close to a
    # fixed ray with its Rayleigh value closer to that eigenvalue than
    # to any other, so each near-singular solve strips the off-ray
    # error instead of contracting it one spectral-gap factor at a
    # time. Runs until the eigen-residual clears a half-tolerance
    # target, keeping the best iterate seen: near a pair of almost
    # tied eigenvalues the early solves return mixtures, and the shift
    # updates need a few rounds to settle onto one member of the pair.
    # Returns None when no solve produced anything finite; the caller
    # keeps the honest slow path in that case.
    n = M.shape[0]
    eye = np.eye(n)
    y = x / float(np.linalg.norm(x))
    mu = lam
    best = None
    best_res = float("inf")
    since_best = 0
    for _ in range(30):
        try:
            z = np.linalg.solve(M - mu * eye, y)
        except np.linalg.LinAlgError:
            try:
                z = np.linalg.solve(M - (mu + 1e-12 * max(1.0, abs(mu))) * eye, y)
            except np.linalg.LinAlgError:
                break
        nz = float(np.linalg.norm(z))
        if not np.isfinite(nz) or nz == 0.0 or not np.all(np.isfinite(z)):
            break
        z = z / nz
        if float(z @ y) < 0.0:
            z = -z
        mz = M @ z
        mu = float(z @ mz)
        res = float(np.linalg.norm(mz - mu * z))
        y = z
        if res < best_res:
            best, best_res, since_best = z, res, 0
        else:
            since_best += 1
        if res <= 0.5 * tol * max(1.0, abs(mu)) or since_best >= 5:
            break
    return best


def birkhoff_eigenvector(
    T,
    cone: ConeHandle,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    perturb_seed: int | None = None,
    zero_tol: float | None = None,
) -> ConeFixedPoint:
    """Eigenvector of a cone-preserving map T inside the cone.

    Iterates the canonical-slice projection of x + T(x). Convergence
    requires both a stagnating iterate (relative change <= tol) and a
    small eigen-residual (||T(x) - lambda x|| <= tol * max(1, |lambda|)
    * ||x||); iterate stagnation alone can mask slow rotation between
    tied dominant directions. If T(x) drops below zero_tol * ||x||
    (default tol) at any iterate, the eigenvalue-0 branch returns that
    iterate immediately. A residual that never settles within max_iter
    raises NonConvergence rather than averaging: a silently wrong
    near-eigenvector would poison everything downstream.

    When T is a matrix and the plain iteration has not settled within a
    warmup window, later steps apply repeatedly squared (and rescaled)
    powers of id + T instead of one application per step. Every power
    of a cone-preserving map preserves the cone and has the same
    dominant ray, so a spectral gap g contracts the mixture like
    g * 2^j instead of g per step. Repeated squaring is numerically
    dirty, so it is capped, halted once the power stops changing (it
    collapses onto the dominant eigenprojection), and its iterates are
    treated as scratch: they only need to stay loosely inside the
    cone, and a power whose rounding noise overwhelms its action
    retires itself and hands back to the plain iteration. Convergence
    on a powered step is only provisional: one plain step under the
    strict membership tolerance must confirm it before the fixed point
    is returned, so the returned vector carries the same cone
    guarantee as the unaccelerated iteration. When an iteration floor
    leaves that confirmation just out of reach, a few inverse-
    iteration solves against the original matrix polish the iterate to
    full accuracy first.
    """
    apply = _as_operator(T, cone.space_dim)
    mat = None
    shifted = None
    if not callable(T):
        mat = require_square(T)
        shifted = np.eye(mat.shape[0]) + mat
    if zero_tol is None:
        zero_tol = tol
    mem_tol = max(10.0 * tol, 1e-12)
    if perturb_seed is not None and cone.perturb is not None:
        seed = cone.perturb(perturb_seed)
    else:
        seed = cone.interior_seed
    x = cone.project_or_normalize(np.asarray(seed, dtype=float))
    if not cone.membership(x, mem_tol):
        raise LeftCone("seed fails cone membership")
    tx = np.asarray(apply(x), dtype=float)
    lam = 0.0
    res = float("inf")
    squarings = 0
    power_stable = False
    power_failed = False
    confirm_plain = False
    stalled = 0
    confirm_fails = 0
    polishes = 0
    plateau_res = float("inf")
    plateau_k = 0

    def polish_candidate(xc: np.ndarray, lamc: float) -> np.ndarray | None:
        # a candidate only counts if it lands back inside the strict
        # cone tolerance; anything else leaves the caller's state alone
        y = _inverse_polish(mat, xc, lamc, tol)
        if y is None:
            return None
        try:
            cand = cone.project_or_normalize(y)
        except ConeSpectraError:
            return None
        if not cone.membership(cand, mem_tol):
            return None
        return cand

    def power_bailout() -> None:
        # powering died on this ray, and the last scratch iterate may
        # sit loosely outside the cone where a strict plain step would
        # wrongly report a cone violation. Adopt a polished candidate
        # when one lands strictly inside, otherwise restart the plain
        # iteration from the seed.
        nonlocal x, tx, confirm_plain, polishes
        if polishes < _MAX_POLISHES and mat is not None:
            polishes += 1
            cand = polish_candidate(x, lam)
            if cand is not None:
                x = cand
                tx = np.asarray(apply(x), dtype=float)
                confirm_plain = True
                return
        x = cone.project_or_normalize(np.asarray(seed, dtype=float))
        tx = np.asarray(apply(x), dtype=float)
        confirm_plain = False

    for k in range(1, max_iter + 1):
        nx = float(np.linalg.norm(x))
        ntx = float(np.linalg.norm(tx))
        if ntx <= zero_tol * nx:
            return ConeFixedPoint(x, 0.0, ntx / nx, k - 1)
        confirming = confirm_plain and shifted is not None
        powered = (
            shifted is not None
            and not power_failed
            and k > _WARMUP_STEPS
            and not confirm_plain
        )
        if powered:
            if not power_stable and squarings < _MAX_SQUARINGS:
                # rescale each squared power by its action on the
                # current iterate, not by its entries: for a far-from-
                # normal matrix the entry scale dwarfs the spectral
                # scale, and entry normalization would shrink the
                # power's action until the iterate is pure noise
                nxt = shifted @ shifted
                scale = 0.0
                if np.all(np.isfinite(nxt)):
                    scale = float(np.linalg.norm(nxt @ x))
                if scale <= 0.0:
                    power_stable = True
                else:
                    nxt = nxt / scale
                    if not np.all(np.isfinite(nxt)):
                        power_stable = True
                    elif max_abs(nxt) == 0.0:
                        power_stable = True
                    else:
                        same = max_abs(
                            nxt / max_abs(nxt) - shifted / max_abs(shifted)
                        )
                        if same <= 1e-9:
                            power_stable = True
                        shifted = nxt
                        squarings += 1
            step = shifted @ x
            # scratch phase: powered iterates only have to stay loosely
            # inside the cone; the strict tolerance is enforced on the
            # confirmation step below, which every returned vector must
            # pass
            mtol = max(mem_tol, 1e-6)
        else:
            step = x + tx
            mtol = mem_tol
        try:
            x_new = cone.project_or_normalize(step)
        except ConeSpectraError:
            if powered:
                # the power's rounding noise has swamped its action on
                # this ray; retire it and resume unaccelerated
                power_failed = True
                power_bailout()
                continue
            raise
        if not cone.membership(x_new, mtol):
            if powered:
                power_failed = True
                power_bailout()
                continue
            if not confirming:
                raise LeftCone(f"iterate {k} left the cone")
            # the powered fixed point is accurate only to the power's
            # rounding floor and can sit a hair outside the strict
            # tolerance; a failed confirmation asks for a polish, it is
            # not a cone violation by the underlying map
            confirm_plain = False
            confirm_fails += 1
            if confirm_fails >= 2 and polishes < _MAX_POLISHES and mat is not None:
                polishes += 1
                confirm_fails = 0
                stalled = 0
                cand = polish_candidate(x, lam)
                if cand is not None:
                    x = cand
                    tx = np.asarray(apply(x), dtype=float)
                    confirm_plain = True
            continue
        tx_new = np.asarray(apply(x_new), dtype=float)
        nn = float(x_new @ x_new)
        lam = float(tx_new @ x_new) / nn
        res = float(np.linalg.norm(tx_new - lam * x_new)) / float(np.sqrt(nn))
        moved = float(np.linalg.norm(x_new - x)) / float(np.linalg.norm(x_new))
        x, tx = x_new, tx_new
        if moved <= tol and res <= tol * max(1.0, abs(lam)):
            if powered:
                confirm_plain = True
            else:
                return ConeFixedPoint(x, lam, res, k)
        else:
            confirm_plain = False
            if res < 0.5 * plateau_res:
                plateau_res = res
                plateau_k = k
            # three signs the iteration has hit a floor it cannot
            # leave on its own: the iterate stops moving while the
            # residual stays above the bar, the powered criteria keep
            # passing while the plain confirmation keeps failing (a
            # floor-sized error contracts only one gap factor per
            # plain step), or the residual goes two hundred steps
            # without halving (nearly tied top eigenvalues, or the
            # plain update's own rounding floor on an ill-scaled
            # matrix). All get the same cure: polish against the
            # original matrix, then let the plain confirmation step
            # apply the usual return criteria.
            if confirming:
                confirm_fails += 1
            if moved <= tol:
                stalled += 1
            elif not confirming:
                stalled = 0
            floored = (
                stalled >= 3
                or confirm_fails >= 2
                or (k - plateau_k >= 200 and res > tol * max(1.0, abs(lam)))
            )
            if floored and polishes < _MAX_POLISHES and mat is not None:
                polishes += 1
                stalled = 0
                confirm_fails = 0
                plateau_k = k
                cand = polish_candidate(x, lam)
                if cand is not None:
                    x = cand
                    tx = np.asarray(apply(x), dtype=float)
                    confirm_plain = True
    raise NonConvergence(
        f"no fixed ray after {max_iter} iterations (residual {res:.3e})",
        iterations=max_iter,
        residual=res,
    )


def perron_frobenius(
    A,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    perturb_seed: int | None = None,
) -> PerronResult:
    """Dominant eigenpair of an entrywise-nonnegative matrix on the
    orthant, with the min/max ratio bracket evaluated over the strictly
    positive coordinates of the fixed vector."""
    A = require_square(A)
    if np.any(A < 0.0):
        raise NegativeEntry("matrix has a negative entry")
    n = A.shape[0]
    fp = birkhoff_eigenvector(A, orthant_handle(n), tol=tol, max_iter=max_iter, perturb_seed=perturb_seed)
    x = np.asarray(fp.vector)
    Ax = A @ x
    pos = x > 1e-8 * float(np.max(x))
    ratios = Ax[pos] / x[pos]
    return PerronResult(fp, float(np.min(ratios)), float(np.max(ratios)))


def congruence_action(S, u) -> np.ndarray:
    """The congruence image u^T S u, exactly symmetrized."""
    S = require_square(S)
    u = require_square(u)
    if S.shape != u.shape:
        raise InconsistentDimension("form and operator dimensions differ")
    return symmetrize(u.T @ S @ u)


def psd_invariant_form(
    u,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    perturb_seed: int | None = None,
) -> ConeFixedPoint:
    """Nonzero positive semidefinite S with u^T S u = lambda S.

    Runs the engine on the congruence action in symmetric coordinates
    over the trace-one slice of the semidefinite cone, then returns the
    fixed point with the matrix itself as the vector, renormalized to
    trace exactly one.
    """
    u = require_square(u)
    d = u.shape[0]
    n = sym_coord_dim(d)
    cols = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        cols[:, k] = sym_to_vec(congruence_action(vec_to_sym(e), u))
    fp = birkhoff_eigenvector(cols, psd_handle(d), tol=tol, max_iter=max_iter, perturb_seed=perturb_seed)
    S = symmetrize(vec_to_sym(np.asarray(fp.vector)))
    S = S / float(np.trace(S))
    lam = float(np.sum(congruence_action(S, u) * S) / np.sum(S * S))
    resid = float(np.linalg.norm(congruence_action(S, u) - lam * S)) / float(np.linalg.norm(S))
    return ConeFixedPoint(S, lam, resid, fp.iterations)


def extremal_decomposition_check(
    u,
    C: "_cones.PolyhedralCone",
    x,
    tol: float = 1e-9,
) -> tuple[np.ndarray, float]:
    """Certificate step behind the fixed-ray existence argument.

    Given x on an extremal ray of a cone invariant under id + u, solves
    (id + u) y = x, checks y stays in C, and checks u(y) is either
    negligible (ratio 0) or parallel to y; the parallel ratio is the
    eigenvalue candidate for y.
    """
    u = require_square(u)
    x = np.asarray(x, dtype=float)
    try:
        y = solve_linear(np.eye(u.shape[0]) + u, x)
    except SingularMatrix as exc:
        raise SingularShift("id + u is numerically singular") from exc
    if not _cones.contains(C, y, tol):
        raise NotInCone("the preimage under id + u is outside the cone")
    uy = u @ y
    ny = float(np.linalg.norm(y))
    nuy = float(np.linalg.norm(uy))
    if nuy <= tol * ny:
        return y, 0.0
    ratio = float(uy @ y) / float(y @ y)
    if float(np.linalg.norm(uy - ratio * y)) > tol * nuy:
        raise NotParallel("u(y) is not parallel to y at the requested tolerance")
    return y, ratio
