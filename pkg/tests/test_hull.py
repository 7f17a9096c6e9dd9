import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from affiq.bodies import standard_body
from affiq.errors import DegenerateInput, EmptyBox
from affiq.hull import (
    ball_volume, body_volume, convex_hull, intrinsic_dim, polygon_areas, sphere_area,
    volume_exact, volume_mc,
)
from affiq.numerics.rng import RngStream


def test_ball_and_sphere_constants():
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert ball_volume(1) == pytest.approx(2.0)


@given(st.integers(2, 5), st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_volume_matches_qhull(n, seed):
    pts = np.random.default_rng(seed).standard_normal((3 * n + 5, n))
    h = convex_hull(pts)
    assert volume_exact(h).value == pytest.approx(ConvexHull(pts).volume, rel=1e-10)


def test_hull_drops_interior_points():
    pts = np.vstack([standard_body("cube", 3).vertices, [[0.5, 0.5, 0.5], [0.2, 0.3, 0.4]]])
    h = convex_hull(pts)
    assert len(h.vertices) == 8
    assert np.all(h.vertices @ h.normals.T <= h.offsets + 1e-12)


def test_merged_facets_of_cube():
    normals, offsets, areas = standard_body("cube", 3).hull.merged_facets
    assert len(normals) == 6
    np.testing.assert_allclose(areas, 1.0)


def test_hull_in_lower_dimension_and_degenerate():
    h = convex_hull(np.array([[0.0], [3.0], [1.0]]))
    assert volume_exact(h).value == 3.0
    with pytest.raises(DegenerateInput):
        convex_hull(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))
    assert intrinsic_dim(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])) == 1


@given(st.integers(0, 2**31), st.integers(3, 40))
@settings(max_examples=40, deadline=None)
def test_polygon_areas_match_qhull(seed, m):
    pts = np.random.default_rng(seed).standard_normal((3, m, 2))
    got = polygon_areas(pts)
    ref = [ConvexHull(p).volume for p in pts]
    np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_polygon_area_with_duplicates_and_collinear():
    sq = np.array([[[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0], [1, 1], [0.5, 0.5]]], dtype=float)
    assert polygon_areas(sq)[0] == pytest.approx(1.0)


def test_volume_mc_unit_disc():
    est = volume_mc(lambda x: np.sum(x * x, axis=1) <= 1, [-1, -1], [1, 1], 100_000, RngStream(3))
    assert abs(est.value - math.pi) < 4 * est.stderr
    with pytest.raises(EmptyBox):
        volume_mc(lambda x: x[:, 0] > 0, [0, 0], [0, 1], 10, RngStream(0))


def test_body_volume_ellipsoid_exact():
    e = standard_body("ellipsoid", 3, axes=[2.0, 1.0, 0.5])
    v = body_volume(e)
    assert v.stderr == 0.0
    assert v.value == pytest.approx(4 * math.pi / 3)
