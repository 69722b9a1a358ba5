import numpy as np
import pytest

from conespectra.cones import (
    ChainResult,
    PolyhedralCone,
    SeparatingFunctional,
    chain_iterate,
    contains,
    double_dual_check,
    dual_cone,
    extremal_rays,
    image_cone,
    separate,
)
from conespectra.errors import (
    DegenerateCone,
    DimensionTooLarge,
    KernelMeetsCone,
    NotInvariant,
    PointInCone,
)


def cone(dim, *gens):
    return PolyhedralCone.from_generators(dim, list(gens))


def same_cone(A, B, tol=1e-9):
    return all(contains(A, g, tol) for g in B.generators) and all(
        contains(B, g, tol) for g in A.generators
    )


def test_generators_normalized_and_deduplicated():
    C = cone(2, [2.0, 0.0], [1.0, 0.0], [0.0, 3.0])
    assert C.generators.shape == (2, 2)
    assert np.allclose(np.linalg.norm(C.generators, axis=1), 1.0)


def test_zero_generator_rejected():
    with pytest.raises(ValueError):
        cone(2, [0.0, 0.0])


def test_zero_cone():
    Z = PolyhedralCone.zero(3)
    assert Z.is_zero
    assert contains(Z, [0.0, 0.0, 0.0])
    assert not contains(Z, [1.0, 0.0, 0.0])


def test_contains_orthant():
    C = PolyhedralCone.orthant(2)
    assert contains(C, [1.0, 1.0])
    assert not contains(C, [-1.0, 0.0])


def test_contains_wedge():
    C = cone(2, [1.0, 0.0], [1.0, 1.0])
    assert contains(C, [2.0, 1.0])
    assert not contains(C, [0.0, 1.0])
    assert not contains(C, [-1.0, 0.0])


def test_contains_dimension_mismatch():
    with pytest.raises(ValueError):
        contains(PolyhedralCone.orthant(2), [1.0, 0.0, 0.0])


def test_json_roundtrip():
    C = cone(2, [1.0, 0.0], [1.0, 1.0])
    D = PolyhedralCone.from_json_dict(C.to_json_dict())
    assert same_cone(C, D)


def test_dual_orthant_is_itself():
    C = PolyhedralCone.orthant(3)
    assert same_cone(dual_cone(C), C)


def test_dual_of_wedge():
    C = cone(2, [1.0, 0.0], [1.0, 1.0])
    D = dual_cone(C)
    expected = cone(2, [0.0, 1.0], [1.0, -1.0])
    assert same_cone(D, expected)


def test_dual_of_zero_cone_is_everything():
    D = dual_cone(PolyhedralCone.zero(2))
    for p in ([1.0, 0.0], [-1.0, 0.0], [0.0, -1.0], [3.0, -2.0]):
        assert contains(D, p)


def test_dual_dimension_guard():
    with pytest.raises(DimensionTooLarge):
        dual_cone(PolyhedralCone.orthant(7))


def test_dual_pairing_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        k = int(rng.integers(1, 6))
        C = PolyhedralCone.from_generators(d, rng.standard_normal((k, d)))
        D = dual_cone(C)
        for g in C.generators:
            for h in D.generators:
                assert float(g @ h) >= -1e-9


def test_double_dual_examples():
    assert double_dual_check(PolyhedralCone.orthant(2))
    assert double_dual_check(cone(2, [1.0, 0.0], [1.0, 1.0]))
    assert double_dual_check(cone(3, [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0]))


def test_extremal_rays_drop_interior_generator():
    C = cone(2, [1.0, 0.0], [0.0, 1.0], [1.0, 1.0])
    E = extremal_rays(C)
    assert len(E) == 2
    dirs = {tuple(np.round(e, 9)) for e in E}
    assert (1.0, 0.0) in dirs and (0.0, 1.0) in dirs


def test_extremal_rays_of_orthant():
    C = PolyhedralCone.orthant(3)
    E = extremal_rays(C)
    assert len(E) == 3


def test_extremal_rays_square_base_pyramid():
    gens = [[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [-1.0, -1.0, 1.0]]
    C = PolyhedralCone.from_generators(3, gens)
    assert len(extremal_rays(C)) == 4


def test_extremal_rays_degenerate_raises():
    C = cone(2, [1.0, 0.0], [-1.0, 0.0])
    with pytest.raises(DegenerateCone):
        extremal_rays(C)


def test_separate_orthant_negative_point():
    C = PolyhedralCone.orthant(2)
    phi = separate(C, [-1.0, -1.0])
    assert isinstance(phi, SeparatingFunctional)
    v = phi.coefficients / np.linalg.norm(phi.coefficients)
    assert np.allclose(v, [1.0, 1.0] / np.sqrt(2.0), atol=1e-9)
    assert phi.value_at_point < 0
    assert phi.min_generator_value >= -1e-12


def test_separate_halfline():
    C = cone(2, [1.0, 0.0])
    phi = separate(C, [0.0, 1.0])
    assert np.allclose(phi.coefficients, [0.0, -1.0], atol=1e-9)


def test_separate_from_zero_cone():
    phi = separate(PolyhedralCone.zero(2), [1.0, 0.0])
    assert np.allclose(phi.coefficients, [-1.0, 0.0], atol=1e-12)


def test_separate_point_inside_raises():
    with pytest.raises(PointInCone):
        separate(PolyhedralCone.orthant(2), [1.0, 1.0])


def test_image_cone_identity():
    C = cone(2, [1.0, 0.0], [1.0, 1.0])
    assert same_cone(image_cone(np.eye(2), C), C)


def test_image_cone_diagonal_fixes_orthant():
    C = PolyhedralCone.orthant(2)
    assert same_cone(image_cone(np.diag([2.0, 3.0]), C), C)


def test_image_cone_shear():
    C = PolyhedralCone.orthant(2)
    D = image_cone(np.array([[1.0, 1.0], [0.0, 1.0]]), C)
    expected = cone(2, [1.0, 0.0], [1.0, 1.0])
    assert same_cone(D, expected)


def test_image_cone_kernel_hit_raises():
    C = PolyhedralCone.orthant(2)
    with pytest.raises(KernelMeetsCone):
        image_cone(np.diag([1.0, 0.0]), C)


def test_chain_identity_is_constant():
    res = chain_iterate(np.eye(2), PolyhedralCone.orthant(2), 5)
    assert isinstance(res, ChainResult)
    assert len(res.cones) == 6
    assert all(g == 0.0 for g in res.gaps)
    # a tilted cone only renormalizes, staying constant to rounding
    res2 = chain_iterate(np.eye(2), cone(2, [1.0, 0.0], [1.0, 1.0]), 5)
    assert all(g <= 1e-12 for g in res2.gaps)


def test_chain_positive_diagonal_fixes_orthant():
    # a positive diagonal map sends each axis ray to itself, so the chain
    # of image cones never moves
    res = chain_iterate(np.diag([1.0, 0.5]), PolyhedralCone.orthant(2), 8)
    assert all(g == 0.0 for g in res.gaps)
    assert same_cone(res.cones[-1], PolyhedralCone.orthant(2))


def test_chain_contracts_to_dominant_ray():
    u = np.array([[2.0, 1.0], [1.0, 2.0]])
    res = chain_iterate(u, PolyhedralCone.orthant(2), 30)
    target = np.array([1.0, 1.0]) / np.sqrt(2.0)
    for g in res.cones[-1].generators:
        assert np.linalg.norm(g - target) <= 1e-3
    # gaps decay
    assert res.gaps[-1] <= 1e-3
    assert res.gaps[0] > res.gaps[-1]


def test_chain_nesting_every_step():
    rng = np.random.default_rng(13)
    u = rng.uniform(0.1, 1.0, (3, 3))
    res = chain_iterate(u, PolyhedralCone.orthant(3), 12)
    for prev, nxt in zip(res.cones, res.cones[1:]):
        for g in nxt.generators:
            assert contains(prev, g, 1e-9)


def test_chain_rejects_noninvariant_map():
    u = np.array([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(NotInvariant):
        chain_iterate(u, PolyhedralCone.orthant(2), 3)


def test_chain_rejects_zero_cone():
    with pytest.raises(DegenerateCone):
        chain_iterate(np.eye(2), PolyhedralCone.zero(2), 3)


def test_chain_json_shape():
    res = chain_iterate(np.eye(2), PolyhedralCone.orthant(2), 2)
    d = res.to_json_dict()
    assert set(d) == {"steps", "gaps"}
    assert len(d["steps"]) == 3
    assert len(d["gaps"]) == 2
