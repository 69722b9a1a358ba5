import pathlib
from types import SimpleNamespace

import numpy as np
import pytest

from conespectra.errors import DimensionTooLarge, ZeroPolynomial
from conespectra.oracle import (
    brute_force_cone_fixed_points,
    cauchy_root_bound,
    psd_check,
    real_roots_oracle,
    sturm_isolate,
    symmetric_spectrum_oracle,
    verify_factorization,
)
from conespectra.polynomial import Polynomial


def poly(*coeffs):
    return Polynomial(coeffs)


def test_cauchy_bound_dominates_roots():
    assert cauchy_root_bound(poly(-1.0, 0.0, 1.0)) >= 1.0
    p = Polynomial.from_roots([2.5, -1.75, 0.3])
    B = cauchy_root_bound(p)
    assert B >= 2.5


def test_sturm_isolates_symmetric_pair():
    brs = sturm_isolate(poly(-1.0, 0.0, 1.0), -3.0, 3.0)
    assert len(brs) == 2
    assert abs(brs[0].refined_root + 1.0) <= 1e-10
    assert abs(brs[1].refined_root - 1.0) <= 1e-10
    for br in brs:
        assert br.lo <= br.refined_root <= br.hi
        assert br.hi - br.lo <= 1e-10


def test_sturm_finds_nothing_for_definite_quadratic():
    assert sturm_isolate(poly(1.0, 0.0, 1.0), -5.0, 5.0) == []


def test_real_roots_trisection_cubic():
    # 2*cos of the 20/140/260 degree angles
    brs = real_roots_oracle(poly(1.0, -3.0, 0.0, 1.0))
    rts = [br.refined_root for br in brs]
    expect = [-1.8793852415718169, 0.34729635533386066, 1.5320888862379562]
    assert len(rts) == 3
    p = poly(1.0, -3.0, 0.0, 1.0)
    for r, e in zip(rts, expect):
        assert abs(r - e) <= 1e-9
        assert abs(float(p(r))) <= 1e-9


def test_real_roots_strips_multiplicity():
    brs = real_roots_oracle(Polynomial.from_roots([1.0, 1.0]))
    assert len(brs) == 1
    assert abs(brs[0].refined_root - 1.0) <= 1e-8


def test_real_roots_edge_inputs():
    with pytest.raises(ZeroPolynomial):
        real_roots_oracle(Polynomial(()))
    assert real_roots_oracle(poly(7.0)) == []


def test_spectrum_diagonal():
    assert np.allclose(symmetric_spectrum_oracle(np.diag([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0], atol=1e-9)


def test_spectrum_coupled_pair():
    vals = symmetric_spectrum_oracle(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(vals, [1.0, 3.0], atol=1e-9)


def test_spectrum_zero_matrix():
    assert np.allclose(symmetric_spectrum_oracle(np.zeros((2, 2))), [0.0, 0.0], atol=1e-9)


def test_spectrum_with_multiplicity():
    vals = symmetric_spectrum_oracle(np.diag([1.0, 2.0, 2.0]))
    assert np.allclose(vals, [1.0, 2.0, 2.0], atol=1e-7)


def test_spectrum_dimension_guard():
    with pytest.raises(DimensionTooLarge):
        symmetric_spectrum_oracle(np.eye(11))


def test_spectrum_random_matches_trace_and_square_sum():
    rng = np.random.default_rng(79)
    for _ in range(10):
        d = int(rng.integers(2, 7))
        u = rng.uniform(-1, 1, (d, d))
        u = (u + u.T) / 2.0
        vals = np.array(symmetric_spectrum_oracle(u))
        assert vals.shape == (d,)
        assert abs(vals.sum() - np.trace(u)) <= 1e-7 * max(1.0, d)
        assert abs((vals**2).sum() - np.sum(u * u)) <= 1e-6 * max(1.0, d)


def test_verify_factorization_exact():
    fl = SimpleNamespace(scale=2.0, factors=((poly(-1.0, 1.0), 2),))
    rep = verify_factorization(poly(2.0, -4.0, 2.0), fl)
    assert rep.max_relative_deviation <= 1e-14
    assert rep.discriminants == ()


def test_verify_factorization_reports_discriminants():
    fl = SimpleNamespace(scale=1.0, factors=((poly(1.0, 0.0, 1.0), 1),))
    rep = verify_factorization(poly(1.0, 0.0, 1.0), fl)
    assert rep.discriminants == (-4.0,)


def test_verify_factorization_flags_mismatch():
    fl = SimpleNamespace(scale=1.0, factors=((poly(1.0, 0.0, 1.0), 1),))
    rep = verify_factorization(poly(2.0, 0.0, 1.0), fl)
    assert rep.max_relative_deviation >= 0.4


def test_psd_check_identity_and_indefinite():
    ok, bound = psd_check(np.eye(2))
    assert ok and abs(bound - 1.0) <= 1e-8
    ok, bound = psd_check(np.diag([1.0, -1.0]))
    assert not ok and abs(bound + 1.0) <= 1e-8


def test_psd_check_singular_boundary():
    ok, bound = psd_check(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert ok
    assert abs(bound) <= 1e-7


def test_psd_check_dimension_guard():
    with pytest.raises(DimensionTooLarge):
        psd_check(np.eye(11))


def test_brute_force_rotation():
    u = np.array([[0.0, -1.0], [1.0, 0.0]])
    pts = brute_force_cone_fixed_points(u)
    assert len(pts) == 1
    fp = pts[0]
    assert abs(fp.eigenvalue - 1.0) <= 1e-8
    assert np.allclose(fp.form, np.eye(2) / 2.0, atol=1e-8)


def test_brute_force_diagonal_enumerates_axes():
    pts = brute_force_cone_fixed_points(np.diag([2.0, 1.0]))
    vals = sorted(round(fp.eigenvalue, 6) for fp in pts)
    assert vals == [1.0, 4.0]
    by_val = {round(fp.eigenvalue, 6): fp.form for fp in pts}
    assert np.allclose(by_val[4.0], np.diag([1.0, 0.0]), atol=1e-8)
    assert np.allclose(by_val[1.0], np.diag([0.0, 1.0]), atol=1e-8)


def test_brute_force_identity_full_eigenspace():
    pts = brute_force_cone_fixed_points(np.eye(2))
    assert len(pts) == 1
    assert pts[0].eigenspace_dim == 3
    assert abs(pts[0].eigenvalue - 1.0) <= 1e-9


def test_oracle_does_not_import_subject_modules():
    src = pathlib.Path(__file__).resolve().parents[1] / "src" / "conespectra" / "oracle.py"
    text = src.read_text()
    for banned in ("engine", "spectral", "polyfactor", "cones", "cli"):
        assert f"from .{banned}" not in text
        assert f"from conespectra.{banned}" not in text
        assert f"import conespectra.{banned}" not in text
