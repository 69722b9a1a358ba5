import numpy as np
import pytest

from conespectra.errors import (
    Diverged,
    GcdIllConditioned,
    InconsistentDimension,
    NotADivisor,
    NotInvariant,
    ZeroPolynomial,
)
from conespectra.polyfactor import (
    FactorList,
    IrreducibleCertificate,
    companion_matrix,
    factor_completely,
    gcd_monic,
    invariant_subspace_to_factor,
    isotropy_kernel,
    polish_factor,
    roots,
    split_once,
    squarefree_decomposition,
)
from conespectra.polynomial import Polynomial

T = Polynomial((0.0, 1.0))


def poly(*coeffs):
    return Polynomial(coeffs)


def test_companion_of_circle_quadratic():
    C = companion_matrix(poly(1.0, 0.0, 1.0))
    assert np.array_equal(C, np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_companion_of_linear():
    assert np.array_equal(companion_matrix(poly(-3.0, 1.0)), np.array([[3.0]]))


def test_companion_char_poly_roundtrip():
    from conespectra.linalg import char_poly

    p = poly(-1.0, 0.0, 0.0, 1.0)
    C = companion_matrix(p)
    assert np.allclose(char_poly(C).coeffs, p.coeffs, atol=1e-12)


def test_companion_monicizes():
    assert np.array_equal(companion_matrix(poly(2.0, 0.0, 2.0)), companion_matrix(poly(1.0, 0.0, 1.0)))


def test_companion_guards():
    with pytest.raises(ZeroPolynomial):
        companion_matrix(Polynomial(()))
    with pytest.raises(InconsistentDimension):
        companion_matrix(poly(5.0))


def test_gcd_shared_linear_factor():
    f = Polynomial.from_roots([1.0, 2.0])
    g = Polynomial.from_roots([1.0, -3.0])
    d = gcd_monic(f, g)
    assert d.degree == 1
    assert abs(d.coeffs[0] + 1.0) <= 1e-12


def test_gcd_coprime_is_one():
    d = gcd_monic(poly(1.0, 0.0, 1.0), poly(-1.0, 1.0))
    assert d.degree == 0
    assert abs(d.coeffs[0] - 1.0) <= 1e-12


def test_gcd_zero_arguments():
    p = poly(2.0, 4.0)
    assert gcd_monic(Polynomial(()), p) == p.monic()
    assert gcd_monic(p, Polynomial(())) == p.monic()
    with pytest.raises(ZeroPolynomial):
        gcd_monic(Polynomial(()), Polynomial(()))


@pytest.mark.parametrize(
    "delta,expect",
    [(1e-12, "common"), (1e-8, "undecidable"), (1e-3, "coprime")],
)
def test_gcd_perturbation_bands(delta, expect):
    f = poly(1.0 + delta, -2.0, 1.0)
    g = poly(-2.0, 2.0)
    if expect == "undecidable":
        with pytest.raises(GcdIllConditioned):
            gcd_monic(f, g)
        return
    d = gcd_monic(f, g)
    if expect == "common":
        assert d.degree == 1
        assert abs(d.coeffs[0] + 1.0) <= 1e-6
    else:
        assert d.degree == 0


def test_squarefree_simple_square():
    parts = squarefree_decomposition(Polynomial.from_roots([1.0, 1.0]))
    assert len(parts) == 1
    q, m = parts[0]
    assert m == 2
    assert np.allclose(q.coeffs, (-1.0, 1.0), atol=1e-12)


def test_squarefree_already_squarefree():
    parts = squarefree_decomposition(poly(1.0, 0.0, 1.0))
    assert parts == [(poly(1.0, 0.0, 1.0), 1)]


def test_squarefree_mixed_multiplicities():
    p = Polynomial.from_roots([1.0, 1.0, -2.0])
    parts = squarefree_decomposition(p)
    assert [(tuple(np.round(q.coeffs, 9)), m) for q, m in parts] == [
        ((2.0, 1.0), 1),
        ((-1.0, 1.0), 2),
    ]


def test_squarefree_reconstructs_random():
    rng = np.random.default_rng(67)
    for _ in range(10):
        rts = rng.uniform(-2, 2, 3)
        p = Polynomial.from_roots([rts[0], rts[0], rts[1], rts[2]])
        prod = Polynomial((1.0,))
        for q, m in squarefree_decomposition(p):
            for _ in range(m):
                prod = prod * q
        assert np.allclose(prod.coeffs, p.monic().coeffs, atol=1e-8)


def test_isotropy_kernel_cases():
    K = isotropy_kernel(np.diag([1.0, 0.0]))
    assert K.shape == (2, 1)
    assert abs(abs(K[1, 0]) - 1.0) <= 1e-12
    assert isotropy_kernel(np.eye(2)).shape == (2, 0)
    S = np.array([[1.0, 2.0], [2.0, 4.0]]) / 5.0
    K = isotropy_kernel(S)
    assert K.shape == (2, 1)
    assert abs(abs(float(K[:, 0] @ np.array([2.0, -1.0]) / np.sqrt(5.0))) - 1.0) <= 1e-10


def test_invariant_subspace_yields_divisor():
    p = poly(2.0, -3.0, 1.0)  # roots 1 and 2
    u = companion_matrix(p)
    W = (np.array([[-2.0], [1.0]]) / np.sqrt(5.0))
    g, q = invariant_subspace_to_factor(p, u, W)
    assert np.allclose(g.coeffs, (-1.0, 1.0), atol=1e-9)
    assert np.allclose(q.coeffs, (-2.0, 1.0), atol=1e-9)


def test_invariant_subspace_cubic():
    p = poly(-1.0, 0.0, 0.0, 1.0)
    u = companion_matrix(p)
    W = np.ones((3, 1)) / np.sqrt(3.0)
    g, q = invariant_subspace_to_factor(p, u, W)
    assert np.allclose(g.coeffs, (-1.0, 1.0), atol=1e-9)
    assert np.allclose(q.coeffs, (1.0, 1.0, 1.0), atol=1e-9)


def test_invariant_subspace_rejects_drift():
    p = poly(-1.0, 0.0, 0.0, 1.0)
    u = companion_matrix(p)
    with pytest.raises(NotInvariant):
        invariant_subspace_to_factor(p, u, np.array([[1.0], [0.0], [0.0]]))


def test_invariant_subspace_rejects_non_divisor():
    # every subspace is invariant for the identity, but the restriction's
    # characteristic polynomial need not divide p
    with pytest.raises(NotADivisor):
        invariant_subspace_to_factor(poly(1.0, 0.0, 1.0), np.eye(2), np.array([[1.0], [0.0]]))


def test_invariant_subspace_dimension_guards():
    p = poly(2.0, -3.0, 1.0)
    u = companion_matrix(p)
    with pytest.raises(InconsistentDimension):
        invariant_subspace_to_factor(p, u, np.zeros((2, 0)))
    with pytest.raises(InconsistentDimension):
        invariant_subspace_to_factor(p, u, np.eye(2))


def test_split_linear():
    out = split_once(poly(-5.0, 1.0))
    assert out.branch == "linear_certificate"
    assert not out.is_split
    assert isinstance(out.certificate, IrreducibleCertificate)
    assert out.certificate.alpha is None


def test_split_irreducible_quadratic():
    out = split_once(poly(1.0, 0.0, 1.0))
    assert out.branch == "quadratic_certificate"
    cert = out.certificate
    assert abs(cert.alpha) <= 1e-12
    assert abs(cert.modulus_sq - 1.0) <= 1e-12
    assert abs(cert.alpha) < 2.0


def test_split_reducible_quadratic():
    out = split_once(poly(2.0, -3.0, 1.0))
    assert out.branch == "quadratic_split"
    g1, g2 = out.factors
    assert np.allclose(g1.coeffs, (-1.0, 1.0), atol=1e-12)
    assert np.allclose(g2.coeffs, (-2.0, 1.0), atol=1e-12)


def test_split_scaled_quadratic():
    out = split_once(poly(4.0, 0.0, 1.0))
    assert out.branch == "quadratic_certificate"
    assert abs(out.certificate.modulus_sq - 4.0) <= 1e-12


def test_split_cubic_with_real_root():
    out = split_once(poly(-1.0, 0.0, 0.0, 1.0))
    assert out.is_split
    assert out.branch in ("isotropy_split", "eigenspace_split")
    prod = out.factors[0] * out.factors[1]
    assert np.allclose(prod.coeffs, (-1.0, 0.0, 0.0, 1.0), atol=1e-8)


def test_split_quartic_without_real_roots():
    p = poly(1.0, 0.0, 0.0, 0.0, 1.0)
    out = split_once(p)
    assert out.branch == "eigenspace_split"
    assert out.isometry_residual <= 1e-7
    assert out.invariant_form is not None
    assert out.form_eigenvalue is not None
    prod = out.factors[0] * out.factors[1]
    assert np.allclose(prod.coeffs, p.coeffs, atol=1e-8)
    evals = np.linalg.eigvalsh(np.asarray(out.invariant_form))
    assert evals.min() >= -1e-9


def test_split_products_are_monic_divisors():
    rng = np.random.default_rng(71)
    for _ in range(6):
        rts = rng.uniform(-2, 2, 4)
        p = Polynomial.from_roots(list(rts))
        out = split_once(p)
        if not out.is_split:
            continue
        g1, g2 = out.factors
        assert abs(g1.lead - 1.0) <= 1e-9
        assert abs(g2.lead - 1.0) <= 1e-9
        prod = g1 * g2
        assert np.allclose(prod.coeffs, p.monic().coeffs, atol=1e-7)


def test_polish_pulls_factor_onto_root():
    g = polish_factor(poly(1.0, 0.0, -1.0).monic(), poly(-0.999, 1.0))
    assert np.allclose(g.coeffs, (-1.0, 1.0), atol=1e-11)


def test_polish_quadratic():
    p = poly(1.0, 0.0, 0.0, 0.0, 1.0)
    g0 = poly(1.0, 1.414, 1.0)
    g = polish_factor(p, g0)
    assert abs(g.coeffs[1] - np.sqrt(2.0)) <= 1e-11
    assert abs(g.coeffs[0] - 1.0) <= 1e-11


def test_polish_fixed_point_returns_input():
    g = poly(-2.0, 1.0)
    assert polish_factor(poly(-2.0, 1.0), g) == g


def test_polish_diverges_on_hopeless_factor():
    # derivative of the residual vanishes at the start, no progress possible
    with pytest.raises(Diverged):
        polish_factor(poly(1.0, 0.0, 1.0), poly(0.0, 1.0))


def test_polish_rejects_high_degree_factor():
    with pytest.raises(InconsistentDimension):
        polish_factor(poly(1.0, 0.0, 0.0, 1.0), poly(1.0, 0.0, 0.0, 1.0))


def test_factor_quartic_circle():
    fl = factor_completely(poly(1.0, 0.0, 0.0, 0.0, 1.0))
    assert len(fl.factors) == 2
    r2 = np.sqrt(2.0)
    (g1, m1), (g2, m2) = fl.factors
    assert m1 == 1 and m2 == 1
    assert np.allclose(g1.coeffs, (1.0, -r2, 1.0), atol=1e-10)
    assert np.allclose(g2.coeffs, (1.0, r2, 1.0), atol=1e-10)


def test_factor_cubic_exact():
    fl = factor_completely(poly(-1.0, 0.0, 0.0, 1.0))
    assert [f.degree for f, _ in fl.factors] == [1, 2]
    assert np.allclose(fl.factors[0][0].coeffs, (-1.0, 1.0), atol=1e-10)
    assert np.allclose(fl.factors[1][0].coeffs, (1.0, 1.0, 1.0), atol=1e-10)


def test_factor_with_multiplicity():
    p = Polynomial.from_roots([1.0, 1.0]) * poly(1.0, 0.0, 1.0)
    fl = factor_completely(p)
    assert [(f.degree, m) for f, m in fl.factors] == [(1, 2), (2, 1)]
    exp = fl.expanded()
    assert np.allclose(exp.coeffs, p.coeffs, atol=1e-9)


def test_factor_keeps_scale():
    fl = factor_completely(poly(-2.0, 0.0, 0.0, 2.0))
    assert fl.scale == 2.0
    assert np.allclose(fl.expanded().coeffs, (-2.0, 0.0, 0.0, 2.0), atol=1e-9)


def test_factor_irreducible_quadratic_passthrough():
    fl = factor_completely(poly(4.0, 0.0, 1.0))
    assert fl.factors == ((poly(4.0, 0.0, 1.0), 1),)


def test_factor_constant_and_zero():
    fl = factor_completely(poly(5.0))
    assert fl.scale == 5.0
    assert fl.factors == ()
    with pytest.raises(ZeroPolynomial):
        factor_completely(Polynomial(()))


def test_factor_random_products_reconstruct():
    rng = np.random.default_rng(73)
    for _ in range(8):
        rts = rng.uniform(-2.0, 2.0, int(rng.integers(2, 6)))
        p = Polynomial.from_roots(list(rts))
        fl = factor_completely(p)
        dev = np.abs(np.array(fl.expanded().coeffs) - np.array(p.coeffs)).max()
        assert dev <= 1e-8 * max(1.0, p.norm_inf)
        for f, _ in fl.factors:
            if f.degree == 2:
                b, c = f.coeffs[1], f.coeffs[0]
                assert b * b - 4.0 * c < 0.0


def test_factor_collect_records_branches():
    outcomes = []
    factor_completely(poly(-1.0, 0.0, 0.0, 1.0), collect=outcomes)
    assert outcomes
    assert all(
        o.branch
        in (
            "linear_certificate",
            "quadratic_certificate",
            "quadratic_split",
            "isotropy_split",
            "eigenspace_split",
            "uniform_rotation_certificate",
        )
        for o in outcomes
    )


def test_roots_conjugate_pair():
    rep = roots(poly(1.0, 0.0, 1.0))
    assert rep.real_roots == ()
    assert len(rep.conjugate_pairs) == 1
    re, im, m = rep.conjugate_pairs[0]
    assert abs(re) <= 1e-12 and abs(im - 1.0) <= 1e-12 and m == 1


def test_roots_mixed():
    rep = roots(poly(-1.0, 0.0, 0.0, 1.0))
    assert len(rep.real_roots) == 1
    r, m = rep.real_roots[0]
    assert abs(r - 1.0) <= 1e-9 and m == 1
    re, im, _ = rep.conjugate_pairs[0]
    assert abs(re + 0.5) <= 1e-9
    assert abs(im - np.sqrt(3.0) / 2.0) <= 1e-9


def test_roots_repeated_real():
    rep = roots(Polynomial.from_roots([2.0, 2.0, 2.0]))
    assert len(rep.real_roots) == 1
    r, m = rep.real_roots[0]
    assert abs(r - 2.0) <= 1e-6 and m == 3


def test_roots_no_negative_zero():
    rep = roots(poly(0.0, 1.0) * poly(1.0, 0.0, 1.0))
    assert str(rep.real_roots[0][0]) == "0.0"
    assert str(rep.conjugate_pairs[0][0]) == "0.0"


def test_factor_list_json_shape():
    d = factor_completely(poly(1.0, 0.0, 0.0, 0.0, 1.0)).to_json_dict()
    assert set(d) == {"scale", "factors"}
    assert all(set(f) == {"coeffs", "multiplicity"} for f in d["factors"])
    r = roots(poly(1.0, 0.0, 1.0)).to_json_dict()
    assert set(r) == {"real_roots", "conjugate_pairs"}


def test_factoring_deterministic():
    p = Polynomial.from_roots([0.3, -1.2, 0.9, 2.1])
    a = factor_completely(p).to_json_dict()
    b = factor_completely(p).to_json_dict()
    assert a == b
