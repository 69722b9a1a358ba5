"""Finitely generated convex cones in generator representation.

A cone is stored as a set of unit-length ray generators; the empty
generator list is the zero cone. Membership, duality, separation,
extremal rays, and the iterated image-cone chain all work on this
representation with explicit floating-point tolerances (default 1e-9 on
normalized data). Halfspace data appears only transiently inside
dual_cone's double-description sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DegenerateCone,
    DimensionTooLarge,
    KernelMeetsCone,
    NotInvariant,
    PointInCone,
)
from .linalg import nnls, require_square

__all__ = [
    "PolyhedralCone",
    "SeparatingFunctional",
    "ChainResult",
    "contains",
    "dual_cone",
    "double_dual_check",
    "extremal_rays",
    "separate",
    "image_cone",
    "chain_iterate",
]

DEFAULT_TOL = 1e-9

_MERGE_DOT = 1.0 - 1e-12  # rays at least this aligned collapse to one


def _as_rows(dim: int, vectors) -> np.ndarray:
    arr = np.asarray(list(vectors), dtype=float)
    if arr.size == 0:
        return np.zeros((0, dim))
    arr = arr.reshape(-1, dim)
    if not np.all(np.isfinite(arr)):
        raise ValueError("generators must be finite")
    return arr


@dataclass(frozen=True)
class PolyhedralCone:
    """Cone of all nonnegative combinations of the stored unit generators."""

    dim: int
    generators: np.ndarray

    @classmethod
    def from_generators(cls, dim: int, generators) -> "PolyhedralCone":
        arr = _as_rows(dim, generators)
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms <= 1e-14):
            raise ValueError("zero generator is not a ray")
        arr = arr / norms[:, None]
        kept: list[np.ndarray] = []
        for row in arr:
            if all(float(row @ k) < _MERGE_DOT for k in kept):
                kept.append(row)
        gens = np.array(kept) if kept else np.zeros((0, dim))
        gens.setflags(write=False)
        return cls(dim, gens)

    @classmethod
    def orthant(cls, dim: int) -> "PolyhedralCone":
        return cls.from_generators(dim, np.eye(dim))

    @classmethod
    def zero(cls, dim: int) -> "PolyhedralCone":
        return cls.from_generators(dim, [])

    @property
    def is_zero(self) -> bool:
        return self.generators.shape[0] == 0

    def to_json_dict(self) -> dict:
        return {"dim": self.dim, "generators": [list(map(float, g)) for g in self.generators]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PolyhedralCone":
        return cls.from_generators(int(obj["dim"]), obj.get("generators", []))


@dataclass(frozen=True)
class SeparatingFunctional:
    """Linear functional nonnegative on a cone and negative at a point.

    min_generator_value > 0 means the functional is strictly positive on
    every generator, i.e. it lies in the interior of the dual cone.
    """

    dim: int
    coefficients: np.ndarray
    min_generator_value: float
    value_at_point: float

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "coefficients": [float(c) for c in self.coefficients],
            "min_generator_value": float(self.min_generator_value),
            "value_at_point": float(self.value_at_point),
        }


@dataclass(frozen=True)
class ChainResult:
    cones: tuple[PolyhedralCone, ...]
    gaps: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {
            "steps": [c.to_json_dict() for c in self.cones],
            "gaps": [float(g) for g in self.gaps],
        }


def _cone_fit(
    A: np.ndarray, x: np.ndarray, bound: float, scan: bool = True, refine: bool = True
) -> tuple[np.ndarray, float]:
    # nonnegative fit of x by the generator columns. For nearly parallel
    # generators the nnls gradient test cannot see improvements whose
    # gradient falls below rounding noise (it scales as residual times
    # the angle between generators), so when the quick pass misses the
    # bound, scan small column subsets directly: some face of at most
    # dim generators carries the exact conic projection with positive
    # least-squares coefficients. Every candidate is clamped to >= 0 and
    # its residual recomputed, so nothing is certified that is not an
    # actual nonnegative combination. Callers that only use positive
    # certificates (dropping a ray once a fit reaches the bound) pass
    # scan=False; for them a missed rescue keeps a redundant ray, which
    # leaves the cone unchanged as a set.
    c = nnls(A, x)
    resid = float(np.linalg.norm(A @ c - x))
    m, n = A.shape
    if scan and resid > bound and n <= 12:
        candidates: list[tuple[int, ...]] = [tuple(range(n))]
        for size in range(1, min(n, m) + 1):
            candidates.extend(combinations(range(n), size))
        for cols in candidates:
            sub = A[:, cols]
            cs = np.maximum(np.linalg.lstsq(sub, x, rcond=None)[0], 0.0)
            rs = float(np.linalg.norm(sub @ cs - x))
            if rs < resid:
                c = np.zeros(n)
                c[list(cols)] = cs
                resid = rs
            if resid <= bound:
                break
    elif refine and resid > bound:
        c2 = nnls(A, x, grad_tol=0.0, max_iter=200 + 20 * n)
        resid2 = float(np.linalg.norm(A @ c2 - x))
        if resid2 < resid:
            c, resid = c2, resid2
    return c, resid


def contains(C: PolyhedralCone, x, tol: float = DEFAULT_TOL) -> bool:
    """Whether x is a nonnegative combination of C's generators, up to
    residual tol * (1 + ||x||)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (C.dim,):
        raise ValueError(f"point of dimension {x.shape} in a dim-{C.dim} cone")
    nx = float(np.linalg.norm(x))
    if C.is_zero:
        return nx <= tol * (1.0 + nx)
    _, resid = _cone_fit(C.generators.T, x, tol * (1.0 + nx))
    return resid <= tol * (1.0 + nx)


def _drop_redundant(rays: list[np.ndarray], dim: int, tol: float) -> list[np.ndarray]:
    # keep a ray only if it is not a nonnegative combination of the others.
    # Quick fits only: dropping needs a constructive witness, while a
    # missed drop just carries a redundant generator forward.
    kept = list(rays)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1 :]
        if others:
            x = kept[i]
            bound = tol * (1.0 + float(np.linalg.norm(x)))
            _, resid = _cone_fit(np.array(others).T, x, bound, scan=False, refine=False)
            if resid <= bound:
                kept.pop(i)
                continue
        i += 1
    return kept


def dual_cone(C: PolyhedralCone, tol: float = DEFAULT_TOL) -> PolyhedralCone:
    """All functionals nonnegative on C, by the double-description sweep.

    Starts from the dual of the zero cone (all of the dual space, rays
    +-e_i) and imposes one halfspace per generator, combining positive
    and negative rays across each new boundary. Guarded to dim <= 6.
    """
    d = C.dim
    if d > 6:
        raise DimensionTooLarge(f"dual cone enumeration limited to dim 6, got {d}")
    rays: list[np.ndarray] = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        rays.append(e.copy())
        rays.append(-e)
    side_tol = 1e-12
    for g in C.generators:
        vals = [float(g @ r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > side_tol]
        zero = [r for r, v in zip(rays, vals) if abs(v) <= side_tol]
        neg = [(r, v) for r, v in zip(rays, vals) if v < -side_tol]
        new_rays = pos + zero
        for p in pos:
            vp = float(g @ p)
            for nr, vn in neg:
                cand = vp * nr - vn * p
                nc = float(np.linalg.norm(cand))
                if nc > 1e-12:
                    new_rays.append(cand / nc)
        merged: list[np.ndarray] = []
        for r in new_rays:
            if all(float(r @ k) < _MERGE_DOT for k in merged):
                merged.append(r)
        rays = _drop_redundant(merged, d, tol)
        if not rays:
            break
    return PolyhedralCone.from_generators(d, rays)


def double_dual_check(C: PolyhedralCone, tol: float = DEFAULT_TOL) -> bool:
    """True when the dual of the dual equals C as a set (checked by
    mutual containment of generators)."""
    DD = dual_cone(dual_cone(C, tol), tol)
    return all(contains(C, g, tol) for g in DD.generators) and all(
        contains(DD, g, tol) for g in C.generators
    )


def extremal_rays(C: PolyhedralCone, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """The generators that are not nonnegative combinations of the other
    generators. Requires a nondegenerate cone (no line through 0)."""
    for g in C.generators:
        if contains(C, -g, tol):
            raise DegenerateCone("cone contains a line; extremal rays are undefined")
    rays = [g.copy() for g in C.generators]
    kept: list[np.ndarray] = []
    for i, g in enumerate(rays):
        others = rays[:i] + rays[i + 1 :]
        if others and contains(PolyhedralCone.from_generators(C.dim, others), g, tol):
            continue
        kept.append(g)
    return kept


def separate(C: PolyhedralCone, a, tol: float = DEFAULT_TOL) -> SeparatingFunctional:
    """Functional phi with phi >= 0 on C and phi(a) < 0, for a outside C.

    phi is the unit vector from a toward its nonnegative-least-squares
    projection onto the cone; projection optimality makes it nonnegative
    on every generator and strictly negative at a.
    """
    a = np.asarray(a, dtype=float)
    if contains(C, a, tol):
        raise PointInCone("the point lies in the cone; nothing separates it")
    if C.is_zero:
        proj = np.zeros(C.dim)
    else:
        A = C.generators.T
        c, _ = _cone_fit(A, a, 0.0, scan=False)
        proj = A @ c
    phi = proj - a
    phi = phi / float(np.linalg.norm(phi))
    mins = min((float(phi @ g) for g in C.generators), default=float("inf"))
    return SeparatingFunctional(C.dim, phi, mins, float(phi @ a))


def image_cone(u, C: PolyhedralCone, tol: float = DEFAULT_TOL) -> PolyhedralCone:
    """Cone generated by the images of C's generators under u; raises
    when a generator is annihilated, since the image would then collapse."""
    u = require_square(u)
    if u.shape[0] != C.dim:
        raise ValueError(f"map of dim {u.shape[0]} applied to a dim-{C.dim} cone")
    images = []
    for g in C.generators:
        ug = u @ g
        if float(np.linalg.norm(ug)) <= tol:
            raise KernelMeetsCone("a generator maps below the zero tolerance")
        images.append(ug)
    return PolyhedralCone.from_generators(C.dim, images)


def _generator_gap(A: PolyhedralCone, B: PolyhedralCone) -> float:
    # symmetric Hausdorff-style distance between unit generator sets
    ga, gb = A.generators, B.generators
    if ga.shape[0] == 0 or gb.shape[0] == 0:
        return 0.0 if ga.shape[0] == gb.shape[0] else float("inf")
    d_ab = max(min(float(np.linalg.norm(a - b)) for b in gb) for a in ga)
    d_ba = max(min(float(np.linalg.norm(a - b)) for a in ga) for b in gb)
    return max(d_ab, d_ba)


def _image_rays_exact(u: np.ndarray, C: PolyhedralCone, tol: float) -> PolyhedralCone:
    # image cone for chain use: normalize each image ray but merge only
    # bit-identical rays. The angular merge used by from_generators can
    # discard more direction than the 1e-9 membership tolerance allows,
    # which would make a later step of a slowly contracting chain fail
    # its nesting check against the collapsed representation.
    rays: list[np.ndarray] = []
    for g in C.generators:
        ug = u @ g
        nug = float(np.linalg.norm(ug))
        if nug <= tol:
            raise KernelMeetsCone("a generator maps below the zero tolerance")
        r = ug / nug
        if not any(np.array_equal(r, k) for k in rays):
            rays.append(r)
    gens = np.array(rays)
    gens.setflags(write=False)
    return PolyhedralCone(C.dim, gens)


def chain_iterate(u, C: PolyhedralCone, n: int, tol: float = DEFAULT_TOL) -> ChainResult:
    """The nested image chain C, u(C), u^2(C), ..., u^n(C).

    Requires u(C) inside C (checked on generators) and a nonzero C. Each
    step verifies that the new generators still pass membership in the
    previous cone, and records the gap between consecutive generator
    sets; for maps that keep shrinking the cone the gaps decay toward a
    fixed ray profile. Nearly parallel generators are kept as separate
    rays rather than merged, so the nesting check stays at rounding
    scale no matter how long the chain runs.
    """
    u = require_square(u)
    if C.is_zero:
        raise DegenerateCone("the chain needs a nonzero starting cone")
    for g in C.generators:
        if not contains(C, u @ g, tol):
            raise NotInvariant("the map does not carry the cone into itself")
    cones = [C]
    gaps: list[float] = []
    current = C
    for k in range(1, n + 1):
        nxt = _image_rays_exact(u, current, tol)
        for g in nxt.generators:
            if not contains(current, g, tol):
                raise NotInvariant(f"nesting failed at step {k}")
        gaps.append(_generator_gap(nxt, current))
        cones.append(nxt)
        current = nxt
    return ChainResult(tuple(cones), tuple(gaps))
