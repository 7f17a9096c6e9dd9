import math

import numpy as np
import pytest

from affiq.bodies import polar, standard_body, support, translate
from affiq.errors import DependentVector, GeometryError
from affiq.grassmann import Subspace, haar_orthogonal, sample_grassmannian, sphere_points
from affiq.hull import sphere_area
from affiq.numerics.rng import RngStream
from affiq.numerics.stats import Linearized
from affiq.rolodex import (
    RolodexPoint, WedgeSpec, fubini_check, le_gauge, le_membership, mu_linearized, mu_ratio,
    parallelepiped_factor, wedge_transform_check, wedge_volume, wedge_volumes,
)

I3 = np.eye(3)


def _perp_vector(E, gen):
    x = gen.standard_normal(E.n)
    return E.complement_residual(x)


def test_wedge_k1_is_width():
    b = standard_body("cross-polytope", 3)
    x = np.array([0.6, 0.0, 0.8])
    assert wedge_volume(WedgeSpec(Subspace.empty(3), x, b)) == pytest.approx(2 * support(b, x))


def test_wedge_axis_case_and_scaling():
    c = standard_body("cube", 3)
    E = Subspace(I3[:, :1])
    assert wedge_volume(WedgeSpec(E, I3[1], c)) == pytest.approx(1.0)
    assert wedge_volume(WedgeSpec(E, 2 * I3[1], c)) == pytest.approx(2.0)
    with pytest.raises(DependentVector):
        wedge_volume(WedgeSpec(E, I3[0], c))


def test_wedge_volumes_batch_matches_single():
    b = standard_body("random-poly", 4, seed=1)
    Q = haar_orthogonal(4, 10, RngStream(2))
    X = np.random.default_rng(3).standard_normal((10, 4))
    batch = wedge_volumes(b, Q[:, :, :2], X)
    single = [wedge_volume(WedgeSpec(Subspace(q[:, :2]), x, b)) for q, x in zip(Q, X)]
    np.testing.assert_allclose(batch, single, rtol=1e-10)


@pytest.mark.parametrize("seed", range(3))
def test_gauge_homogeneity_symmetry_translation(seed):
    gen = np.random.default_rng(seed)
    b = standard_body("random-poly", 4, seed=seed)
    E = sample_grassmannian(4, 2, RngStream(seed))
    x = _perp_vector(E, gen)
    g = le_gauge(b, E, x)
    assert le_gauge(b, E, 2.5 * x) == pytest.approx(2.5 * g, rel=1e-10)
    assert le_gauge(b, E, -x) == pytest.approx(g, rel=1e-10)
    moved = translate(b, gen.standard_normal(4))
    assert le_gauge(moved, E, x) == pytest.approx(g, rel=1e-9)


def test_le_membership_origin_and_half_polar():
    b = standard_body("cross-polytope", 3)
    assert le_membership(b, Subspace.empty(3), np.zeros(3))
    half_polar = polar(b)
    X = np.random.default_rng(4).uniform(-0.6, 0.6, (1000, 3))
    mine = np.array([le_membership(b, Subspace.empty(3), x) for x in X])
    ref = half_polar.contains(2 * X, tol=0.0)
    gauge = np.array([le_gauge(b, Subspace.empty(3), x) for x in X])
    near = np.abs(gauge - 1.0) < 1e-12
    assert np.all((mine == ref) | near)


def test_rolodex_point_requires_orthogonality():
    E = Subspace(I3[:, :1])
    with pytest.raises(GeometryError):
        RolodexPoint(E, [1.0, 1.0, 0.0])


@pytest.mark.parametrize("seed", range(5))
def test_le_convexity_midpoints(seed):
    gen = np.random.default_rng(10 + seed)
    b = standard_body("random-poly", 4, seed=20 + seed)
    E = sample_grassmannian(4, 2, RngStream(seed))
    B = np.linalg.svd(np.eye(4) - E.projector)[0][:, :2]
    # members: random directions in E^perp scaled inside the level set
    d = gen.standard_normal((2000, 2)) @ B.T
    g = wedge_volumes(b, np.broadcast_to(E.frame, (2000, 4, 2)), d)
    pts = d / g[:, None] * gen.uniform(0.0, 1.0, 2000)[:, None]
    mids = 0.5 * (pts[:1000] + pts[1000:])
    gm = wedge_volumes(b, np.broadcast_to(E.frame, (1000, 4, 2)), mids)
    assert np.all(gm <= 1.0 + 1e-7)


def test_fubini_examples():
    c = standard_body("cube", 3)
    lhs, rhs = fubini_check(c, Subspace(I3[:, :1]), I3[1], grid=256)
    assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0, abs=1e-3)
    s = standard_body("simplex", 3)
    lhs, rhs = fubini_check(s, Subspace(I3[:, :1]), I3[1], grid=512)
    assert rhs == pytest.approx(lhs, rel=5e-3)
    lhs, rhs = fubini_check(s, Subspace(I3[:, :1]), (I3[1] + I3[2]) / math.sqrt(2), grid=512)
    assert rhs == pytest.approx(lhs, rel=5e-3)


def test_fubini_two_dimensional_E():
    b = standard_body("cross-polytope", 3)
    lhs, rhs = fubini_check(b, Subspace(I3[:, :2]), I3[2], grid=64)
    assert rhs == pytest.approx(lhs, rel=5e-3)


def test_fubini_rejects_bad_input():
    c = standard_body("cube", 3)
    with pytest.raises(GeometryError):
        fubini_check(standard_body("ball", 3), Subspace(I3[:, :1]), I3[1])
    with pytest.raises(GeometryError):
        fubini_check(c, Subspace(I3[:, :1]), I3[0] + I3[1])


def test_wedge_transform_examples():
    c = standard_body("cube", 3)
    xs = I3[:2]
    lhs, rhs = wedge_transform_check(c, np.eye(3), xs)
    assert lhs == rhs
    lhs, rhs = wedge_transform_check(c, np.diag([2.0, 1.0, 1.0]), xs)
    assert lhs == pytest.approx(2.0, abs=1e-9) and rhs == pytest.approx(2.0, abs=1e-9)
    Q = haar_orthogonal(3, 1, RngStream(5))[0]
    lhs, rhs = wedge_transform_check(standard_body("simplex", 3), Q, xs)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_wedge_transform_random_maps():
    b = standard_body("random-poly", 4, seed=6)
    gen = np.random.default_rng(7)
    for i in range(20):
        T = gen.standard_normal((4, 4)) + 2 * np.eye(4)
        lhs, rhs = wedge_transform_check(b, T, 2, RngStream(i))
        assert abs(lhs - rhs) <= 1e-7 * max(1.0, abs(lhs))


def test_parallelepiped_factor():
    assert parallelepiped_factor(np.array([[2.0, 0, 0], [1.0, 3.0, 0]])) == pytest.approx(6.0)


def test_mu_k1_matches_direct_sphere_integral():
    # k = 1: E = {0}, theta uniform on the sphere, weight 1, |P_theta K| = width
    b = standard_body("simplex", 3)
    mu = mu_linearized(b, I3[2], 1, 50_000, RngStream(8))
    th = sphere_points(3, 50_000, RngStream(9))
    widths = np.array([support(b, t) + support(b, -t) for t in th])
    ref = Linearized.mean(widths ** -3.0, "s") * (sphere_area(3) / 3)
    assert abs(mu.value - ref.value) < 4 * math.hypot(mu.stderr, ref.stderr)


def test_mu_u_independent_on_ball():
    ball = standard_body("ball", 4)
    a = mu_linearized(ball, np.eye(4)[0], 2, 20_000, RngStream(1))
    b = mu_linearized(ball, np.ones(4) / 2, 2, 20_000, RngStream(2))
    assert abs(a.value - b.value) < 4 * math.hypot(a.stderr, b.stderr) + 1e-12


def test_mu_ratio_body_independent():
    u = I3[2]
    r_ball = mu_ratio(standard_body("ball", 3), u, 2, 100_000, RngStream(3))
    r_cube = mu_ratio(standard_body("cube", 3), u, 2, 100_000, RngStream(4))
    assert abs(r_ball.value - r_cube.value) < 4 * math.hypot(r_ball.stderr, r_cube.stderr)
