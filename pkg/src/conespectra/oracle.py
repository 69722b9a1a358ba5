"""Independent ground-truth machinery: Sturm-sequence root isolation,
bisection refinement, and brute-force checks on small instances.

Nothing in this module touches the cone engine, the cone-based
eigenvalue path, or the factorization pipeline; it referees them from
the outside using only classical tools (signed remainder sequences,
characteristic polynomials, closed 2x2 formulas). Bisection rather than
Newton everywhere: unconditional convergence beats speed in a referee.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, InconsistentDimension, IntervalTooSmall, ZeroPolynomial
from .linalg import char_poly, kernel_basis, max_abs, require_square, require_symmetric, sym_to_vec, vec_to_sym
from .polynomial import Polynomial

__all__ = [
    "RootBracket",
    "FactorReport",
    "BruteForceFixedPoint",
    "cauchy_root_bound",
    "sturm_sequence",
    "sturm_count",
    "sturm_isolate",
    "real_roots_oracle",
    "symmetric_spectrum_oracle",
    "verify_factorization",
    "psd_check",
    "brute_force_cone_fixed_points",
]


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    sign_change: bool
    refined_root: float

    def to_json_dict(self) -> dict:
        return {
            "lo": float(self.lo),
            "hi": float(self.hi),
            "sign_change": bool(self.sign_change),
            "refined_root": float(self.refined_root),
        }


@dataclass(frozen=True)
class FactorReport:
    """Expansion check of a claimed factorization: the largest
    coefficientwise deviation (relative to the input's coefficient
    scale) and the discriminant of every quadratic factor."""

    max_relative_deviation: float
    discriminants: tuple[float, ...]
    expanded: Polynomial

    def to_json_dict(self) -> dict:
        return {
            "max_relative_deviation": float(self.max_relative_deviation),
            "discriminants": [float(x) for x in self.discriminants],
        }


@dataclass(frozen=True)
class BruteForceFixedPoint:
    form: np.ndarray
    eigenvalue: float
    eigenspace: np.ndarray
    eigenspace_dim: int


def cauchy_root_bound(p: Polynomial) -> float:
    """1 + max |a_i| / |a_d|; every root lies in [-B, B]."""
    c = p.coeffs
    if p.degree < 1:
        return 1.0
    return 1.0 + float(np.max(np.abs(c[:-1]))) / abs(float(c[-1]))


def _poly_gcd_monic(f: Polynomial, g: Polynomial, tol: float = 1e-9) -> Polynomial:
    f = f.trimmed(1e-14)
    g = g.trimmed(1e-14)
    if g.is_zero:
        return f.monic() if not f.is_zero else f
    if f.is_zero:
        return g.monic()
    a, b = f.monic(), g.monic()
    if a.degree < b.degree:
        a, b = b, a
    while True:
        _, r = a.divmod(b)
        # zero test against the working pair's scale, never against the
        # remainder's own norm (a pure-noise remainder is self-similar)
        ref = max(1.0, a.norm_inf, b.norm_inf)
        if r.is_zero or r.norm_inf <= tol * ref:
            return b.monic()
        r = r.trimmed(tol)
        if r.degree == 0:
            return Polynomial(np.array([1.0]))
        a, b = b, r.monic()


def _squarefree_part(p: Polynomial, tol: float = 1e-9) -> Polynomial:
    g = _poly_gcd_monic(p, p.derivative(), tol)
    if g.degree < 1:
        return p.monic()
    q, _ = p.divmod(g)
    return q.monic()


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Signed remainder sequence, each element rescaled by the positive
    factor 1/|lead| to contain coefficient growth without disturbing
    signs."""

    def unit_lead(q: Polynomial) -> Polynomial:
        return Polynomial(q.coeffs / abs(q.lead))

    seq = [unit_lead(p)]
    dp = p.derivative()
    if dp.is_zero:
        return seq
    seq.append(unit_lead(dp))
    while seq[-1].degree >= 1:
        _, r = seq[-2].divmod(seq[-1])
        ref = max(1.0, seq[-2].norm_inf, seq[-1].norm_inf)
        if r.is_zero or r.norm_inf <= 1e-13 * ref:
            break
        r = Polynomial(-r.coeffs).trimmed(1e-13)
        if r.is_zero:
            break
        seq.append(unit_lead(r))
    return seq


def sturm_count(seq: list[Polynomial], x: float) -> int:
    signs = []
    for q in seq:
        v = float(q(x))
        if v != 0.0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _roots_in(seq: list[Polynomial], lo: float, hi: float) -> int:
    return sturm_count(seq, lo) - sturm_count(seq, hi)


def sturm_isolate(p: Polynomial, lo: float, hi: float, refine_width: float = 1e-13) -> list[RootBracket]:
    """Disjoint brackets isolating each real root of a squarefree p in
    [lo, hi], refined by count-guided bisection. Multiple roots are the
    caller's problem: strip them first."""
    seq = sturm_sequence(p)
    out: list[RootBracket] = []
    stack = [(float(lo), float(hi))]
    while stack:
        a, b = stack.pop()
        c = _roots_in(seq, a, b)
        if c == 0:
            continue
        if c == 1:
            out.append(_refine(p, seq, a, b, refine_width))
            continue
        if b - a <= 16.0 * np.finfo(float).eps * max(1.0, abs(a), abs(b)):
            raise IntervalTooSmall(f"cannot isolate {c} roots in [{a}, {b}]")
        m = 0.5 * (a + b)
        stack.append((m, b))
        stack.append((a, m))
    out.sort(key=lambda br: br.lo)
    return out


def _refine(p: Polynomial, seq: list[Polynomial], a: float, b: float, width: float) -> RootBracket:
    a0, b0 = a, b
    target = width * max(1.0, abs(a), abs(b))
    for _ in range(200):
        if b0 - a0 <= target:
            break
        m = 0.5 * (a0 + b0)
        if _roots_in(seq, a0, m) >= 1:
            b0 = m
        else:
            a0 = m
    return RootBracket(a0, b0, True, 0.5 * (a0 + b0))


def _multiplicity(p: Polynomial, r: float, rel_tol: float = 1e-5) -> int:
    scale = max(1.0, p.norm_inf) * max(1.0, abs(r)) ** p.degree
    q = p
    fact = 1.0
    for j in range(1, p.degree + 1):
        q = q.derivative()
        fact *= j
        if abs(float(q(r))) / fact > rel_tol * scale:
            return j
    return p.degree


def symmetric_spectrum_oracle(u) -> list[float]:
    """All eigenvalues of a symmetric matrix, with multiplicity, from
    Sturm isolation on the characteristic polynomial."""
    u = require_symmetric(u)
    d = u.shape[0]
    if d > 10:
        raise DimensionTooLarge(f"spectrum oracle limited to dim 10, got {d}")
    p = char_poly(u)
    sf = _squarefree_part(p)
    B = cauchy_root_bound(p) + 1.0
    roots = [br.refined_root for br in sturm_isolate(sf, -B, B)]
    spectrum: list[float] = []
    for r in roots:
        spectrum.extend([r] * _multiplicity(p, r))
    if len(spectrum) != d:
        raise InconsistentDimension(
            f"found {len(spectrum)} eigenvalues for a dim-{d} matrix; spectrum too degenerate to resolve"
        )
    return sorted(spectrum)


def real_roots_oracle(p: Polynomial) -> list[RootBracket]:
    """Brackets for the distinct real roots of any nonzero p: the
    multiple-root content is stripped first, then Sturm isolation runs
    over the Cauchy disk."""
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial has every number as a root")
    sf = _squarefree_part(p)
    if sf.degree < 1:
        return []
    B = cauchy_root_bound(sf) + 1.0
    return sturm_isolate(sf, -B, B)


def verify_factorization(p: Polynomial, fl) -> FactorReport:
    """Expand scale * prod(factor^mult) and report the coefficientwise
    deviation from p. Accepts any object with .scale and .factors."""
    expanded = Polynomial(np.array([float(fl.scale)]))
    discs: list[float] = []
    for factor, mult in fl.factors:
        for _ in range(int(mult)):
            expanded = expanded * factor
        if factor.degree == 2:
            b, c = float(factor.coeffs[1]), float(factor.coeffs[0])
            discs.append(b * b - 4.0 * c)
    n = max(p.coeffs.size, expanded.coeffs.size)
    pc = np.zeros(n)
    ec = np.zeros(n)
    pc[: p.coeffs.size] = p.coeffs
    ec[: expanded.coeffs.size] = expanded.coeffs
    dev = float(np.max(np.abs(ec - pc))) / max(1.0, p.norm_inf)
    return FactorReport(dev, tuple(discs), expanded)


def psd_check(S, tol: float = 1e-9) -> tuple[bool, float]:
    """Minimum-eigenvalue bound of a symmetric matrix from Sturm
    isolation of its characteristic polynomial; is_psd when the bound
    clears -tol."""
    S = require_symmetric(S)
    if S.shape[0] > 10:
        raise DimensionTooLarge(f"psd check limited to dim 10, got {S.shape[0]}")
    p = char_poly(S)
    sf = _squarefree_part(p)
    B = cauchy_root_bound(p) + 1.0
    brackets = sturm_isolate(sf, -B, B)
    if not brackets:
        raise InconsistentDimension("no real eigenvalue located for a symmetric matrix")
    bound = min(br.refined_root for br in brackets)
    return bound >= -tol, bound


def _psd_min_eig_2x2(S: np.ndarray) -> float:
    a, b, c = float(S[0, 0]), float(S[0, 1]), float(S[1, 1])
    return 0.5 * (a + c - float(np.hypot(a - c, 2.0 * b)))


def brute_force_cone_fixed_points(u) -> list[BruteForceFixedPoint]:
    """Every positive semidefinite fixed direction of the congruence
    action of a 2x2 matrix, by direct eigen-analysis of the 3x3
    congruence matrix in symmetric coordinates.

    Each entry carries a trace-one representative, its scaling factor,
    and the full eigenspace (as symmetric-coordinate columns) so callers
    can match a candidate against degenerate eigenspaces.
    """
    u = require_square(u)
    if u.shape[0] != 2:
        raise InconsistentDimension("brute-force enumeration is for dim 2 only")
    K = np.empty((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        E = vec_to_sym(e)
        M = u.T @ E @ u
        K[:, k] = sym_to_vec(0.5 * (M + M.T))
    p = char_poly(K)
    sf = _squarefree_part(p)
    B = cauchy_root_bound(p) + 1.0
    out: list[BruteForceFixedPoint] = []
    for br in sturm_isolate(sf, -B, B):
        lam = br.refined_root
        if lam < -1e-9:
            continue
        V = kernel_basis(K - lam * np.eye(3), 1e-7)
        if V.shape[1] == 0:
            continue
        rep = _psd_representative(V)
        if rep is None:
            continue
        out.append(BruteForceFixedPoint(rep, lam, V, V.shape[1]))
    return out


def _psd_representative(V: np.ndarray) -> np.ndarray | None:
    # projection of the identity onto the eigenspace, else a grid walk
    # over the 2-plane; a semidefinite direction with positive trace is
    # returned trace-normalized
    target = sym_to_vec(np.eye(2))
    cand = V @ (V.T @ target)
    S = vec_to_sym(cand)
    tr = float(np.trace(S))
    scale = max(1.0, max_abs(S))
    if tr > 1e-9 and _psd_min_eig_2x2(S) >= -1e-9 * scale:
        return S / tr
    if V.shape[1] == 1:
        S = vec_to_sym(V[:, 0])
        tr = float(np.trace(S))
        if abs(tr) <= 1e-9:
            return None
        S = S * np.sign(tr)
        if _psd_min_eig_2x2(S) >= -1e-9 * max(1.0, max_abs(S)):
            return S / float(np.trace(S))
        return None
    if V.shape[1] == 2:
        for theta in np.linspace(0.0, np.pi, 721)[:-1]:
            c = np.cos(theta) * V[:, 0] + np.sin(theta) * V[:, 1]
            S = vec_to_sym(c)
            tr = float(np.trace(S))
            if abs(tr) <= 1e-9:
                continue
            S = S * np.sign(tr)
            if _psd_min_eig_2x2(S) >= -1e-9 * max(1.0, max_abs(S)):
                return S / float(np.trace(S))
    return None
