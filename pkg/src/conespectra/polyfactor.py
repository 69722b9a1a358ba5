"""Complete factorization of real polynomials into linear and
quadratic factors, driven by the cone fixed-point machinery.

The splitting step works on the companion matrix u of the polynomial:
an invariant semidefinite form S with u^T S u = lambda S either has a
nontrivial kernel (a u-invariant subspace, hence a proper factor), or is
definite, in which case u / sqrt(lambda) is orthogonal in the S inner
product and an eigenspace of the symmetrized orthogonal matrix yields
the split. A polynomial that refuses to split is certified irreducible:
degree one, or a quadratic with negative discriminant.

Everything downstream of the engine is elementary: Euclidean gcd for
the squarefree decomposition, long division, and a Newton polish of the
final linear and quadratic factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import psd_invariant_form
from .errors import (
    Diverged,
    GcdIllConditioned,
    InconsistentDimension,
    NonConvergence,
    NotADivisor,
    NotInvariant,
    NotPositiveDefinite,
    SingularMatrix,
    ZeroPolynomial,
)
from .linalg import (
    char_poly,
    cholesky,
    kernel_basis,
    max_abs,
    orthonormalize_columns,
    solve_linear,
    solve_triangular,
)
from .polynomial import Polynomial
from .spectral import spectral_eigenvalue

__all__ = [
    "IrreducibleCertificate",
    "SplitOutcome",
    "FactorList",
    "RootReport",
    "companion_matrix",
    "gcd_monic",
    "squarefree_decomposition",
    "isotropy_kernel",
    "invariant_subspace_to_factor",
    "split_once",
    "polish_factor",
    "factor_completely",
    "roots",
]

_KERNEL_LADDER = (1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)


@dataclass(frozen=True)
class IrreducibleCertificate:
    """Witness that a monic polynomial admits no further real split.

    For a quadratic t^2 - a*r*t + r^2 with conjugate roots of modulus r,
    modulus_sq holds r^2 and alpha holds a = 2 cos(angle), so |alpha| < 2
    certifies a negative discriminant. Both are None for a linear."""

    polynomial: Polynomial
    alpha: float | None
    modulus_sq: float | None

    def to_json_dict(self) -> dict:
        return {
            "coeffs": [float(c) for c in self.polynomial.coeffs],
            "alpha": None if self.alpha is None else float(self.alpha),
            "modulus_sq": None if self.modulus_sq is None else float(self.modulus_sq),
        }


@dataclass(frozen=True)
class SplitOutcome:
    """Result of one splitting attempt on a monic polynomial.

    Exactly one of factors / certificate is set. branch records which
    route produced the outcome; the invariant-form diagnostics are set
    whenever the companion-matrix machinery actually ran, and
    isometry_residual only on the eigenspace route (it is the Frobenius
    distance of the whitened map from orthogonality)."""

    branch: str
    factors: tuple[Polynomial, Polynomial] | None
    certificate: IrreducibleCertificate | None
    invariant_form: np.ndarray | None = None
    form_eigenvalue: float | None = None
    isometry_residual: float | None = None

    @property
    def is_split(self) -> bool:
        return self.factors is not None


def companion_matrix(p: Polynomial) -> np.ndarray:
    """Companion matrix of p (monic-ized), subdiagonal ones and the
    negated coefficients in the last column."""
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial has no companion matrix")
    if p.degree == 0:
        raise InconsistentDimension("companion matrix needs degree >= 1")
    a = p.monic().coeffs
    d = p.degree
    C = np.zeros((d, d))
    for i in range(d - 1):
        C[i + 1, i] = 1.0
    C[:, d - 1] = -a[:d]
    return C


def gcd_monic(f: Polynomial, g: Polynomial, zero_tol: float = 1e-9, band: float = 50.0) -> Polynomial:
    """Monic gcd by the Euclidean ladder with unit-norm rescaling.

    A remainder is declared zero below zero_tol (relative to the working
    pair); a remainder inside (zero_tol, band * zero_tol] is evidence
    the ladder cannot be trusted either way and raises."""
    if f.is_zero and g.is_zero:
        raise ZeroPolynomial("gcd of two zero polynomials")
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    a, b = (f, g) if f.degree >= g.degree else (g, f)
    a = a * (1.0 / a.norm_inf)
    b = b * (1.0 / b.norm_inf)
    while True:
        if b.degree == 0:
            return Polynomial(np.array([1.0]))
        _, r = a.divmod(b)
        ref = max(1.0, a.norm_inf, b.norm_inf)
        rn = r.norm_inf if not r.is_zero else 0.0
        if rn <= zero_tol * ref:
            return b.monic()
        if rn <= band * zero_tol * ref:
            raise GcdIllConditioned(
                f"remainder norm {rn:.3g} sits in the undecidable band at degree {b.degree}"
            )
        r = (r * (1.0 / rn)).trimmed(1e-13)
        a, b = b, r


def squarefree_decomposition(p: Polynomial, zero_tol: float = 1e-9) -> list[tuple[Polynomial, int]]:
    """Monic squarefree parts with multiplicities, p = prod q_i^i over
    the returned (q_i, i), computed by repeated gcd with the derivative
    so no root finding is involved."""
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial has no squarefree decomposition")
    pm = p.monic()
    if pm.degree <= 0:
        return []
    dp = pm.derivative()
    a0 = gcd_monic(pm, dp, zero_tol)
    b, _ = pm.divmod(a0)
    c, _ = dp.divmod(a0)
    d = c - b.derivative()
    parts: list[tuple[Polynomial, int]] = []
    i = 1
    while b.degree >= 1:
        q = gcd_monic(b, d, zero_tol)
        if q.degree >= 1:
            parts.append((q, i))
        b, _ = b.divmod(q)
        c, _ = d.divmod(q)
        d = c - b.derivative()
        i += 1
    return parts


def isotropy_kernel(S, tol: float = 1e-7) -> np.ndarray:
    """Orthonormal basis of the null directions of a semidefinite form;
    for an invariant form these directions form an invariant subspace."""
    return kernel_basis(np.asarray(S, dtype=float), tol)


def invariant_subspace_to_factor(
    p: Polynomial,
    u: np.ndarray,
    W: np.ndarray,
    subspace_tol: float = 1e-6,
    divisor_tol: float = 1e-6,
) -> tuple[Polynomial, Polynomial]:
    """Factor of p read off an invariant subspace of its companion
    matrix: the characteristic polynomial of the restriction, and the
    cofactor from long division.

    Raises NotInvariant when W fails u W = W (W^T u W), and NotADivisor
    when the division remainder is out of proportion."""
    W = np.asarray(W, dtype=float)
    k = W.shape[1]
    if k == 0 or k >= u.shape[0]:
        raise InconsistentDimension(f"subspace dimension {k} cannot produce a proper factor")
    ur = W.T @ u @ W
    drift = max_abs(u @ W - W @ ur)
    if drift > subspace_tol * max(1.0, max_abs(u)):
        raise NotInvariant(f"subspace drifts under the map by {drift:.3g}")
    g = char_poly(ur)
    q, r = p.monic().divmod(g)
    rn = 0.0 if r.is_zero else r.norm_inf
    if rn > divisor_tol * max(1.0, p.norm_inf):
        raise NotADivisor(f"restriction polynomial leaves remainder of norm {rn:.3g}")
    return g, q


def _stable_quadratic_roots(b: float, c: float) -> tuple[float, float]:
    # both roots real; the larger-magnitude root first via the sign
    # trick, the other from the product to dodge cancellation
    sq = float(np.sqrt(max(b * b - 4.0 * c, 0.0)))
    big = (-b - sq) / 2.0 if b >= 0.0 else (-b + sq) / 2.0
    other = 0.0 if big == 0.0 else c / big
    return (big, other) if big <= other else (other, big)


def _quadratic_outcome(pm: Polynomial) -> SplitOutcome:
    c, b = float(pm.coeffs[0]), float(pm.coeffs[1])
    disc = b * b - 4.0 * c
    if disc < 0.0:
        cert = IrreducibleCertificate(pm, -b / float(np.sqrt(c)) + 0.0, c)
        return SplitOutcome("quadratic_certificate", None, cert)
    r1, r2 = _stable_quadratic_roots(b, c)
    g1 = Polynomial(np.array([-r1, 1.0]))
    g2 = Polynomial(np.array([-r2, 1.0]))
    return SplitOutcome("quadratic_split", (g1, g2), None)


def _definite_cholesky(S: np.ndarray, first_kernel_tol: float) -> tuple[np.ndarray | None, np.ndarray | None]:
    """Either a Cholesky factor of the invariant form or a late-detected
    kernel from an escalating threshold ladder."""
    try:
        return cholesky(S), None
    except NotPositiveDefinite:
        for kt in _KERNEL_LADDER:
            if kt <= first_kernel_tol:
                continue
            K = isotropy_kernel(S, kt)
            if 0 < K.shape[1] < S.shape[0]:
                return None, K
        raise


def split_once(
    p: Polynomial,
    tol: float = 1e-11,
    max_iter: int = 300_000,
    perturb_seed: int | None = None,
) -> SplitOutcome:
    """One splitting attempt: either two monic factors or an
    irreducibility certificate, per the module docstring."""
    if p.is_zero:
        raise ZeroPolynomial("cannot split the zero polynomial")
    pm = p.monic()
    d = pm.degree
    if d == 0:
        raise InconsistentDimension("constants admit no factorization step")
    if d == 1:
        return SplitOutcome("linear_certificate", None, IrreducibleCertificate(pm, None, None))
    if d == 2:
        return _quadratic_outcome(pm)

    u = companion_matrix(pm)
    fp = psd_invariant_form(u, tol=tol, max_iter=max_iter, perturb_seed=perturb_seed)
    S = np.asarray(fp.vector, dtype=float)
    lam = float(fp.eigenvalue)

    ktol = 1e-7
    K = isotropy_kernel(S, ktol)
    if 0 < K.shape[1] < d:
        g, q = invariant_subspace_to_factor(pm, u, K)
        return SplitOutcome("isotropy_split", (g, q), None, S, lam)
    if K.shape[1] >= d:
        raise InconsistentDimension("invariant form collapsed to zero")

    if lam <= 1e-12:
        raise InconsistentDimension("definite invariant form with a vanishing compression eigenvalue")
    L, K_late = _definite_cholesky(S, ktol)
    if K_late is not None:
        g, q = invariant_subspace_to_factor(pm, u, K_late)
        return SplitOutcome("isotropy_split", (g, q), None, S, lam)

    s = float(np.sqrt(lam))
    w = u / s
    Mt = solve_triangular(L, w.T @ L, lower=True)
    M = Mt.T
    isometry = float(np.linalg.norm(Mt @ M - np.eye(d)))
    Mp = M + Mt
    cert = spectral_eigenvalue(Mp, tol=max(tol, 1e-12), max_iter=max_iter, perturb_seed=perturb_seed)
    alpha = float(cert.eigenvalue)
    scaleM = max(1.0, max_abs(Mp))
    Vw = np.zeros((d, 0))
    for kt in _KERNEL_LADDER:
        Vw = kernel_basis(Mp - alpha * np.eye(d), kt * scaleM)
        if Vw.shape[1] > 0:
            break
    if Vw.shape[1] == 0:
        raise NonConvergence(
            f"no eigenspace at the certified symmetrized eigenvalue {alpha:.6g}", cert.iterations, cert.residual
        )
    V = orthonormalize_columns(solve_triangular(L.T, Vw, lower=False))
    k = V.shape[1]
    if k == d:
        if d == 2:
            quad = Polynomial(np.array([lam, -alpha * s, 1.0]))
            return SplitOutcome(
                "uniform_rotation_certificate",
                None,
                IrreducibleCertificate(quad, alpha, lam),
                S,
                lam,
                isometry,
            )
        raise InconsistentDimension(
            f"symmetrized eigenspace fills degree {d}; a real polynomial of degree >= 3 must split"
        )
    g, q = invariant_subspace_to_factor(pm, u, V)
    return SplitOutcome("eigenspace_split", (g, q), None, S, lam, isometry)


def _remainder_vec(p: Polynomial, b: float, c: float) -> np.ndarray:
    _, r = p.divmod(Polynomial(np.array([c, b, 1.0])))
    out = np.zeros(2)
    if not r.is_zero:
        out[: r.coeffs.size] = r.coeffs
    return out


def polish_factor(p: Polynomial, g: Polynomial, max_steps: int = 30) -> Polynomial:
    """Newton refinement of a monic linear or quadratic factor against
    p, measured by the division remainder. Returns the best iterate;
    raises Diverged when Newton only ever made things worse."""
    target = 1e-12 * max(1.0, p.norm_inf)
    gm = g.monic()

    if gm.degree == 1:
        dp = p.derivative()
        r = -float(gm.coeffs[0])
        best_r, best_res = r, abs(float(p(r)))
        res0 = best_res
        growths = 0
        cur = best_res
        for _ in range(max_steps):
            if best_res <= target:
                break
            d = float(dp(r))
            if d == 0.0:
                break
            r = r - float(p(r)) / d
            res = abs(float(p(r)))
            if res < best_res:
                best_r, best_res = r, res
            growths = growths + 1 if res >= cur else 0
            cur = res
            if growths >= 3:
                break
        if best_res > target and best_res >= res0 and res0 > target:
            raise Diverged(f"linear polish stuck at residual {best_res:.3g}")
        return Polynomial(np.array([-best_r, 1.0]))

    if gm.degree == 2:
        b, c = float(gm.coeffs[1]), float(gm.coeffs[0])
        F = _remainder_vec(p, b, c)
        best = (b, c)
        best_res = float(np.max(np.abs(F)))
        res0 = best_res
        growths = 0
        cur = best_res
        for _ in range(max_steps):
            if best_res <= target:
                break
            h = 1e-7 * max(1.0, abs(b), abs(c))
            J = np.column_stack(
                [
                    (_remainder_vec(p, b + h, c) - _remainder_vec(p, b - h, c)) / (2.0 * h),
                    (_remainder_vec(p, b, c + h) - _remainder_vec(p, b, c - h)) / (2.0 * h),
                ]
            )
            try:
                step = solve_linear(J, F)
            except SingularMatrix:
                break
            b, c = b - float(step[0]), c - float(step[1])
            F = _remainder_vec(p, b, c)
            res = float(np.max(np.abs(F)))
            if res < best_res:
                best, best_res = (b, c), res
            growths = growths + 1 if res >= cur else 0
            cur = res
            if growths >= 3:
                break
        if best_res > target and best_res >= res0 and res0 > target:
            raise Diverged(f"quadratic polish stuck at residual {best_res:.3g}")
        return Polynomial(np.array([best[1], best[0], 1.0]))

    raise InconsistentDimension("only linear or quadratic factors are polished")


def _split_with_retry(f: Polynomial, tol: float, max_iter: int, collect) -> SplitOutcome:
    try:
        out = split_once(f, tol=tol, max_iter=max_iter)
    except NonConvergence:
        out = split_once(f, tol=tol, max_iter=max_iter * 10, perturb_seed=13)
    if collect is not None:
        collect.append(out)
    return out


def _leaf_factors(f: Polynomial) -> list[Polynomial]:
    out = split_once(f)
    if out.is_split:
        return list(out.factors)
    return [out.certificate.polynomial]


@dataclass(frozen=True)
class FactorList:
    """scale * prod(polynomial^multiplicity) over factors, every factor
    monic of degree one or two."""

    scale: float
    factors: tuple[tuple[Polynomial, int], ...]

    def expanded(self) -> Polynomial:
        out = Polynomial(np.array([float(self.scale)]))
        for poly, mult in self.factors:
            for _ in range(int(mult)):
                out = out * poly
        return out

    def to_json_dict(self) -> dict:
        return {
            "scale": float(self.scale),
            "factors": [
                {"coeffs": [float(c) for c in poly.coeffs], "multiplicity": int(mult)}
                for poly, mult in self.factors
            ],
        }


@dataclass(frozen=True)
class RootReport:
    """All roots of a real polynomial: real ones, and conjugate pairs
    given by real part and positive imaginary part."""

    real_roots: tuple[tuple[float, int], ...]
    conjugate_pairs: tuple[tuple[float, float, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "real_roots": [{"root": float(r), "multiplicity": int(m)} for r, m in self.real_roots],
            "conjugate_pairs": [
                {"real": float(re), "imag": float(im), "multiplicity": int(m)}
                for re, im, m in self.conjugate_pairs
            ],
        }


def factor_completely(
    p: Polynomial,
    tol: float = 1e-11,
    max_iter: int = 300_000,
    collect: list | None = None,
) -> FactorList:
    """Factor p over the reals into monic linear and quadratic pieces
    times the leading coefficient.

    Squarefree decomposition first, then repeated splitting of each
    part down to degree <= 2 leaves, then a Newton polish of every leaf
    against its squarefree part (the part, not p itself, so repeated
    roots cannot spoil the quadratic convergence). collect, when given,
    receives every SplitOutcome from the degree >= 3 stages."""
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial has no factorization")
    scale = float(p.lead)
    pm = p.monic()
    if pm.degree == 0:
        return FactorList(scale, ())
    entries: list[tuple[Polynomial, int]] = []
    for q, mult in squarefree_decomposition(pm):
        leaves: list[Polynomial] = []
        stack = [q]
        while stack:
            f = stack.pop()
            if f.degree <= 0:
                continue
            if f.degree <= 2:
                leaves.extend(_leaf_factors(f))
                continue
            out = _split_with_retry(f, tol, max_iter, collect)
            stack.extend(out.factors)
        for leaf in leaves:
            try:
                leaf = polish_factor(q, leaf)
            except Diverged:
                pass
            entries.append((leaf, mult))
    entries.sort(key=lambda e: (e[0].degree, tuple(float(c) for c in e[0].coeffs), e[1]))
    return FactorList(scale, tuple(entries))


def roots(p: Polynomial, tol: float = 1e-11, max_iter: int = 300_000) -> RootReport:
    """All roots via complete factorization."""
    fl = factor_completely(p, tol=tol, max_iter=max_iter)
    real: list[tuple[float, int]] = []
    pairs: list[tuple[float, float, int]] = []
    for poly, mult in fl.factors:
        if poly.degree == 1:
            real.append((-float(poly.coeffs[0]) + 0.0, mult))
        else:
            c, b = float(poly.coeffs[0]), float(poly.coeffs[1])
            re = -b / 2.0 + 0.0
            im = float(np.sqrt(max(c - b * b / 4.0, 0.0)))
            pairs.append((re, im, mult))
    real.sort(key=lambda e: e[0])
    pairs.sort(key=lambda e: (e[0], e[1]))
    return RootReport(tuple(real), tuple(pairs))
