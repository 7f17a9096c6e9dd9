import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affiq.bodies import affine_image, scale, standard_body
from affiq.errors import BadDims, ZeroVector
from affiq.grassmann import Subspace, haar_frames, haar_orthogonal, sphere_points
from affiq.hull import ball_volume
from affiq.numerics.rng import RngStream
from affiq.quermass import (
    QuermassSpec, ball_quermass, hyperplane_shadows, i_kp, phi_k, polar_projection_chords,
    polar_projection_from_phi, polar_projection_linearized, polar_projection_norm,
    polar_projection_volume, projection_volume, projection_volumes, q_kp, quermass_linearized,
)


@pytest.mark.parametrize("n", [3, 4])
def test_cube_shadow_is_l1_norm(n):
    c = standard_body("cube", n)
    th = sphere_points(n, 100, RngStream(n))
    np.testing.assert_allclose(hyperplane_shadows(c, th), np.abs(th).sum(axis=1), atol=1e-9)


def test_cube_diagonal_shadow():
    th = np.ones(3) / math.sqrt(3)
    assert hyperplane_shadows(standard_body("cube", 3), th)[0] == pytest.approx(math.sqrt(3))


@pytest.mark.parametrize("name,n,k", [
    ("random-poly", 4, 1), ("random-poly", 4, 2), ("random-poly", 4, 3),
    ("random-poly", 5, 3), ("cross-polytope", 3, 2), ("ellipsoid", 3, 2),
])
def test_batch_paths_match_hull_reference(name, n, k):
    b = standard_body(name, n, seed=4, axes=np.arange(1.0, n + 1))
    frames = haar_orthogonal(n, 25, RngStream(5))
    fast = projection_volumes(b, frames, k)
    ref = [projection_volume(b, Subspace(f[:, :k])).value for f in frames]
    np.testing.assert_allclose(fast, ref, rtol=1e-10)


def test_cofactor_normals_when_only_k_columns_given():
    b = standard_body("random-poly", 4, seed=8)
    frames = haar_frames(4, 4, 30, RngStream(6))
    np.testing.assert_allclose(projection_volumes(b, frames[:, :, :3]), projection_volumes(b, frames, 3),
                               rtol=1e-12)


def test_ball_quermass_exact_with_zero_stderr():
    ball = standard_body("ball", 3)
    for k in (1, 2):
        for p in (1, 0, -3):
            est = q_kp(QuermassSpec(ball, k, p, 1000), RngStream(1))
            assert est.stderr == 0.0
            assert est.value == pytest.approx(ball_quermass(3, k, ball_volume(3)), rel=1e-14)
            assert est.value == pytest.approx(ball_volume(3), rel=1e-14)


def test_ball_normalized_is_one():
    for k in (1, 2, 3):
        est = i_kp(standard_body("ball", 3), k, -3, 1000, RngStream(2))
        assert est.value == pytest.approx(1.0, rel=1e-13)
        assert est.stderr == 0.0


def test_cube_mean_width_and_surface():
    c = standard_body("cube", 3)
    q1 = q_kp(QuermassSpec(c, 1, 1, 100_000), RngStream(3))
    q2 = q_kp(QuermassSpec(c, 2, 1, 100_000), RngStream(3))
    assert abs(q1.value - math.pi) < 4 * q1.stderr
    assert abs(q2.value - 2.0) < 4 * q2.stderr
    assert q2.transform == "none"


def test_q_n_is_volume():
    b = standard_body("simplex", 3)
    est = q_kp(QuermassSpec(b, 3, -3, 100), RngStream(0))
    assert est.value == pytest.approx(1 / 6)
    assert est.stderr == 0.0


def test_spec_validation():
    with pytest.raises(BadDims):
        QuermassSpec(standard_body("cube", 3), 4, 1)


@given(st.floats(-6.0, 2.0), st.floats(0.1, 2.0))
@settings(max_examples=25, deadline=None)
def test_p_monotone_on_shared_samples(p, dp):
    b = standard_body("simplex", 3)
    vols = projection_volumes(b, haar_frames(3, 2, 4000, RngStream(7)), 2)
    lo = quermass_linearized(vols, 3, 2, p).value
    hi = quermass_linearized(vols, 3, 2, p + dp).value
    assert lo <= hi * (1 + 1e-12)


@pytest.mark.parametrize("lam", [0.5, 2.0, 3.7])
def test_homogeneity_of_degree_k(lam):
    b = standard_body("random-poly", 3, seed=2)
    for k in (1, 2):
        a = q_kp(QuermassSpec(b, k, -3, 5000), RngStream(9))
        s = q_kp(QuermassSpec(scale(b, lam), k, -3, 5000), RngStream(9))
        assert s.value == pytest.approx(lam**k * a.value, rel=1e-10)


def test_phi_is_volume_preserving_linear_invariant():
    b = standard_body("cube", 3, centered=True)
    T = np.array([[2.0, 0.5, 0.0], [0.0, 1.0, 0.3], [0.0, 0.0, 0.5]])
    a = phi_k(b, 2, 100_000, RngStream(10))
    t = phi_k(affine_image(b, T), 2, 100_000, RngStream(11))
    assert abs(a.value - t.value) < 4 * math.hypot(a.stderr, t.stderr)


def test_polar_projection_of_ball():
    est = polar_projection_volume(standard_body("ball", 3), 1000, RngStream(1))
    assert est.value == pytest.approx((4 * math.pi / 3) / math.pi**3, rel=1e-13)
    assert est.stderr == 0.0


def test_polar_projection_scaling():
    b = standard_body("simplex", 3)
    th = sphere_points(3, 2000, RngStream(2))
    a = polar_projection_linearized(b, th).value
    s = polar_projection_linearized(scale(b, 2.0), th).value
    assert s == pytest.approx(2.0 ** (-3 * 2) * a, rel=1e-12)


def test_polar_projection_consistent_with_phi():
    b = standard_body("cube", 3)
    phi = phi_k(b, 2, 200_000, RngStream(3))
    direct = polar_projection_volume(b, 200_000, RngStream(4))
    via_phi = polar_projection_from_phi(phi.value, 3)
    # d via_phi / d phi = -n via_phi / phi
    se = math.hypot(direct.stderr, 3 * via_phi * phi.stderr / phi.value)
    assert abs(direct.value - via_phi) < 4 * se


def test_polar_projection_norm_values():
    assert polar_projection_norm(standard_body("ball", 3), [0, 0, 2.0]) == pytest.approx(2 * math.pi)
    c = standard_body("cube", 3)
    assert polar_projection_norm(c, [0, 0, 1.0]) == pytest.approx(1.0)
    x = np.array([0.3, -1.0, 0.2])
    assert polar_projection_norm(c, 3 * x) == pytest.approx(3 * polar_projection_norm(c, x))
    with pytest.raises(ZeroVector):
        polar_projection_norm(c, np.zeros(3))


def test_polar_projection_chords_of_ball():
    # Pi* B^3 is the ball of radius 1/pi
    u = np.array([0.0, 0.0, 1.0])
    Y = np.array([[0.0, 0.0, 0.0], [0.2, 0.0, 0.0]])
    lo, hi = polar_projection_chords(standard_body("ball", 3), u, Y)
    r = 1 / math.pi
    np.testing.assert_allclose(hi, [r, math.sqrt(r * r - 0.04)], atol=1e-12)
    np.testing.assert_allclose(lo, -hi, atol=1e-12)
