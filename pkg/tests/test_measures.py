import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crofton3d.convex_body import Ball, cube, planar_polygon, quermassintegrals, regular_polygon, regular_tetrahedron, unit_ball
from crofton3d.mc import McConfig, McEstimate
from crofton3d.measures import (
    VerifierReport,
    ball_alpha_integral,
    ball_area_squared_integral,
    ball_herglotz_integral,
    ball_slice_l2_integral,
    crofton_baselines,
    exterior_integral,
    alpha_integrand,
    herglotz_rhs,
    lemma1_consistency,
    pair_constant_quadrature,
    sphere_constant_pair,
    sphere_constant_triple,
    thm1_rhs,
    triple_constant_quadrature,
    verify_herglotz,
    verify_planar_crofton,
    verify_thm1,
    verify_thm2,
    verify_thm3,
    verify_thm4,
)
from crofton3d.measures.lines_planes import line_measure, plane_measure
from crofton3d.measures.theorems import omega_excess
from crofton3d.solid_angle import exterior_alpha, exterior_area
from crofton3d.sphere import uniform_sphere

PI = np.pi
CFG = McConfig(seed=21, samples=2 * 10**5, chunk=10**4)
BODIES = {"ball": unit_ball(), "cube": cube(), "tetrahedron": regular_tetrahedron()}


def within(est, exact, k=3.0):
    return abs(est.total - exact) <= k * est.stderr


# -- sphere constants ------------------------------------------------------------------


def test_constant_quadratures():
    assert pair_constant_quadrature() == pytest.approx(0.5, abs=1e-12)
    assert triple_constant_quadrature() == pytest.approx(PI / 8, abs=1e-10)


def test_constants_mc():
    assert within(sphere_constant_pair(CFG), 0.5)
    assert within(sphere_constant_triple(CFG), PI / 8)


def test_antithetic_pairs_identical():
    assert sphere_constant_pair(CFG, antithetic=True) == sphere_constant_pair(CFG)


@given(st.integers(0, 2**32 - 1), st.permutations([0, 1, 2]))
def test_triple_permutation_invariance(seed, perm):
    v = uniform_sphere(np.random.default_rng(seed), 3)
    assert abs(np.linalg.det(v[list(perm)])) == pytest.approx(abs(np.linalg.det(v)), rel=1e-12)


# -- baselines and the Lemma ----------------------------------------------------------


def test_ball_normalization_self_test():
    q = quermassintegrals(unit_ball())
    lines = line_measure(unit_ball(), CFG)
    planes = plane_measure(unit_ball(), CFG)
    assert abs(lines.mean - 2 * PI**2) < 0.01 * 2 * PI**2
    assert planes.mean == pytest.approx(q.M, rel=1e-12)  # every sampled plane meets the ball


@pytest.mark.parametrize("name", list(BODIES))
def test_crofton_baselines(name):
    reports = crofton_baselines(BODIES[name], CFG)
    assert len(reports) == 5
    for r in reports:
        assert r.passed, r.to_dict()


@pytest.mark.parametrize("name, exact", [("ball", 8 * PI**3), ("cube", 9 * PI**2)])
def test_lemma1(name, exact):
    r = lemma1_consistency(BODIES[name], CFG)
    assert r.passed, r.to_dict()
    assert r.details["exact"] == pytest.approx(exact, rel=1e-12)
    assert abs(r.lhs.total - exact) < 4 * r.lhs.stderr


# -- exterior integrals ---------------------------------------------------------------


def test_ball_quadratures():
    assert ball_alpha_integral() == pytest.approx(16 * PI**3 / 3, rel=1e-10)
    assert ball_area_squared_integral() == pytest.approx(16 * PI**3 / 3, rel=1e-10)
    assert ball_slice_l2_integral() == pytest.approx(32 * PI**3 / 3, rel=1e-12)
    assert ball_herglotz_integral() == pytest.approx(32 * PI**2 - 2 * PI**4, rel=1e-10)


@pytest.mark.parametrize("r", [0.5, 2.0])
def test_ball_quadrature_scaling(r):
    assert ball_alpha_integral(r) == pytest.approx(r**3 * ball_alpha_integral(1.0), rel=1e-10)
    assert ball_herglotz_integral(r) == pytest.approx(r**2 * ball_herglotz_integral(1.0), rel=1e-10)


def test_ball_alpha_by_monte_carlo():
    est = exterior_integral(unit_ball(), alpha_integrand(unit_ball()), CFG)
    assert abs(est.total - 16 * PI**3 / 3) < 0.02 * 16 * PI**3 / 3
    assert 0 < est.tail < 0.1 * est.mean


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_thm1_rhs_scaling(lam):
    K = cube()
    assert thm1_rhs(K.transformed(scale=lam)) == pytest.approx(lam**3 * thm1_rhs(K), rel=1e-12)
    assert thm1_rhs(Ball(np.zeros(3), lam)) == pytest.approx(lam**3 * thm1_rhs(unit_ball()), rel=1e-12)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_herglotz_rhs_scaling(lam):
    assert herglotz_rhs(cube().transformed(scale=lam)) == pytest.approx(lam**2 * herglotz_rhs(cube()), rel=1e-12)


@pytest.mark.parametrize("f", [exterior_alpha, lambda K, p: exterior_area(K, p) ** 2], ids=["alpha", "area2"])
def test_far_field_decay(f):
    """f(P) d^4 stays bounded and settles along random rays.

    Checked out to 200 circumradii (10x the default truncation); much further out
    alpha is a difference of two O(d^-2) terms and double precision runs out.
    """
    K = cube()
    dirs = uniform_sphere(np.random.default_rng(0), 16)
    d = np.geomspace(4 * K.circumradius, 200 * K.circumradius, 40)
    for u in dirs:
        scaled = f(K, K.centroid + d[:, None] * u) * d**4
        assert np.all(np.isfinite(scaled)) and 0 < scaled.min() and scaled.max() < 50
        assert scaled[-1] == pytest.approx(scaled[-2], rel=1e-2)


# -- verifiers ------------------------------------------------------------------------


def test_thm1_cube():
    r = verify_thm1(cube(), CFG)
    assert r.rhs == pytest.approx(7 * PI**2, rel=1e-12)
    assert r.passed and r.rel_error < 0.02


def test_thm1_ball_quadrature_and_mc():
    q = verify_thm1(unit_ball(), CFG)
    assert q.details["method"] == "quadrature" and q.rel_error < 1e-8
    assert verify_thm1(unit_ball(), CFG, method="mc").passed
    with pytest.raises(ValueError):
        verify_thm1(cube(), CFG, method="quadrature")


def test_thm2_small_budget():
    cfg = McConfig(seed=5, samples=2 * 10**4, chunk=10**4)
    for K in (unit_ball(), cube()):
        r = verify_thm2(K, cfg, inner=200)
        assert r.passed, r.to_dict()
    assert r.rhs == pytest.approx(27 * PI**3 - PI**4, rel=1e-12)


def test_thm3():
    ball = verify_thm3(unit_ball(), CFG)
    assert ball.passed and ball.lhs == pytest.approx(32 * PI**3 / 3) and ball.rel_error < 1e-6
    r = verify_thm3(cube(), CFG)
    assert r.passed and r.rel_error < 0.02


def test_thm4():
    ball = verify_thm4(unit_ball(), CFG)
    assert ball.passed and ball.details["equality_expected"]
    assert abs(ball.details["margin"]) < 0.01 * 16 * PI**3 / 3
    mc_ball = verify_thm4(unit_ball(), CFG, method="mc")
    assert mc_ball.passed
    r = verify_thm4(cube(), CFG)
    assert r.passed and r.details["margin_sigma"] > 5


def test_herglotz():
    ball = verify_herglotz(unit_ball(), CFG)
    assert ball.passed and ball.rhs == pytest.approx(32 * PI**2 - 2 * PI**4, rel=1e-12)
    r = verify_herglotz(cube(), CFG)
    assert r.rhs == pytest.approx(18 * PI**2 - 3 * PI**3, rel=1e-12)
    assert r.passed and r.rel_error < 0.02
    assert verify_herglotz(unit_ball(), CFG, method="mc").passed


@pytest.mark.parametrize("polygon, rhs", [
    (planar_polygon([[0, 0], [1, 0], [1, 1], [0, 1]]), 16 - 2 * PI),
    (planar_polygon([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]]), 9 - 2 * PI * np.sqrt(3) / 4),
    (regular_polygon(512, 1.5), None),
], ids=["square", "triangle", "disc"])
def test_planar_crofton(polygon, rhs):
    r = verify_planar_crofton(polygon, CFG)
    if rhs is None:
        assert r.rhs == pytest.approx(2 * PI**2 * 1.5**2, rel=1e-4)
    else:
        assert r.rhs == pytest.approx(rhs, rel=1e-12)
    assert r.passed and r.rel_error < 0.02


@given(st.floats(0, 0.03))
def test_omega_excess_series(w):
    taylor = w**3 / 6 - w**5 / 120 + w**7 / 5040
    assert omega_excess(w) == pytest.approx(taylor, rel=1e-11, abs=1e-300)


def test_verifiers_deterministic_across_workers():
    a = verify_thm1(cube(), McConfig(seed=3, samples=10**5, chunk=10**4, workers=1))
    b = verify_thm1(cube(), McConfig(seed=3, samples=10**5, chunk=10**4, workers=4))
    assert a.to_dict() == b.to_dict()


# -- report pass rule -----------------------------------------------------------------


@given(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3), st.floats(0, 10), st.floats(0, 0.1))
def test_pass_rule(lhs_mean, rhs, stderr, rel_tol):
    lhs = McEstimate(lhs_mean, stderr, 1000, 0)
    r = VerifierReport("x", lhs, rhs, rel_tol)
    expected = abs(lhs_mean - rhs) <= max(3 * stderr, rel_tol * abs(rhs))
    assert r.passed == expected
    if stderr > 0:
        assert r.residual_sigma == pytest.approx(abs(lhs_mean - rhs) / stderr)


def test_report_serializes_exact_and_mc():
    r = VerifierReport("x", McEstimate(1.0, 0.1, 1000, 7, tail=0.01), 1.0, 0.0)
    d = r.to_dict()
    assert d["lhs"]["value"] == 1.01 and d["lhs"]["tail"] == 0.01 and d["rhs"]["exact"]
    assert math.isclose(d["residual_sigma"], 0.1)
