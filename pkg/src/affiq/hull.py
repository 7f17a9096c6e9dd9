"""Convex hulls and volumes in dimensions 1 through 6."""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numba import njit
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateInput, EmptyBox
from .numerics.rng import RngStream, map_chunks

MAX_DIM = 6
RANK_TOL = 1e-10
MC_BUDGET = 200_000
# beyond these vertex counts Qhull output gets large and volumes fall back to MC
EXACT_VERTEX_LIMIT = {1: 10**9, 2: 10**9, 3: 10**6, 4: 20_000, 5: 2_000, 6: 500}


@dataclass(frozen=True, eq=False)
class HullResult:
    """Extreme points plus a triangulated facet list with outward normals.

    ``facets`` index into ``vertices``; ``normals``/``offsets`` describe the
    supporting hyperplane ``<normal, x> <= offset`` of each facet simplex.
    """

    vertices: np.ndarray
    facets: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    dim: int

    @property
    def centroid(self):
        return self.vertices.mean(axis=0)

    def facet_measures(self):
        """(dim-1)-volume of every facet simplex."""
        d = self.dim
        if d == 1:
            return np.ones(len(self.facets))
        pts = self.vertices[self.facets]
        edges = pts[:, 1:, :] - pts[:, :1, :]
        gram = edges @ np.swapaxes(edges, 1, 2)
        return np.sqrt(np.clip(np.linalg.det(gram), 0.0, None)) / math.factorial(d - 1)

    @cached_property
    def merged_facets(self):
        """(normals, offsets, measures) with coplanar facet simplices merged."""
        key = np.round(np.column_stack([self.normals, self.offsets]), 9)
        _, first, inv = np.unique(key, axis=0, return_index=True, return_inverse=True)
        areas = np.bincount(inv.reshape(-1), weights=self.facet_measures())
        return self.normals[first], self.offsets[first], areas


@dataclass(frozen=True)
class VolumeResult:
    value: float
    method: str = "exact"
    stderr: float = 0.0


def intrinsic_dim(points, tol=RANK_TOL):
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0
    s = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _canonical(points):
    pts = np.asarray(points, dtype=float)
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def convex_hull(points, k=None) -> HullResult:
    """Hull of a point cloud that is full-dimensional in R^k."""
    pts = _canonical(np.atleast_2d(points))
    k = pts.shape[1] if k is None else k
    if pts.shape[1] != k:
        raise DegenerateInput(f"points live in R^{pts.shape[1]}, not R^{k}")
    if k > MAX_DIM:
        raise DegenerateInput(f"hull dimension {k} exceeds {MAX_DIM}")
    if len(pts) < k + 1 or intrinsic_dim(pts) < k:
        raise DegenerateInput("point set is not full-dimensional; project it first")
    if k == 1:
        lo, hi = int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))
        verts = pts[[lo, hi]]
        return HullResult(verts, np.array([[0], [1]]), np.array([[-1.0], [1.0]]),
                          np.array([-verts[0, 0], verts[1, 0]]), 1)
    try:
        qh = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(str(exc)) from exc
    idx = np.sort(qh.vertices)
    remap = np.full(len(pts), -1)
    remap[idx] = np.arange(len(idx))
    facets = remap[qh.simplices]
    normals = qh.equations[:, :-1]
    offsets = -qh.equations[:, -1]
    return HullResult(pts[idx], facets, normals, offsets, k)


def volume_exact(h: HullResult) -> VolumeResult:
    """Fan triangulation from the vertex centroid."""
    if h.dim == 1:
        return VolumeResult(float(h.vertices[1, 0] - h.vertices[0, 0]))
    c = h.centroid
    simp = h.vertices[h.facets] - c
    dets = np.abs(np.linalg.det(simp))
    return VolumeResult(float(math.fsum(dets.tolist())) / math.factorial(h.dim))


def volume_mc(oracle, lo, hi, n_samples, rng: RngStream) -> VolumeResult:
    """Hit-or-miss volume over the box [lo, hi]; ``oracle`` maps (m, n) -> bool."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if np.any(hi <= lo):
        raise EmptyBox("bounding box has empty interior")
    box = float(np.prod(hi - lo))

    def chunk(c, a, b):
        x = lo + (hi - lo) * rng.generator(c).random((b - a, lo.size))
        return np.asarray(oracle(x), dtype=bool)

    hits = map_chunks(chunk, n_samples)
    frac = float(np.count_nonzero(hits)) / n_samples
    return VolumeResult(box * frac, "monte-carlo", box * math.sqrt(frac * (1 - frac) / n_samples))


def body_volume(b, budget=MC_BUDGET, rng=None) -> VolumeResult:
    from .bodies import Ellipsoid, VPolytope, support

    if isinstance(b, Ellipsoid):
        if b.is_ball:
            return VolumeResult(ball_volume(b.dim) * b.radius ** b.dim)
        return VolumeResult(abs(float(np.linalg.det(b.shape))) * ball_volume(b.dim))
    if isinstance(b, VPolytope) and len(b.vertices) <= EXACT_VERTEX_LIMIT.get(b.dim, 0):
        return volume_exact(b.hull)
    rng = rng if rng is not None else RngStream(0, 0x766F6C)
    eye = np.eye(b.dim)
    hi = np.array([support(b, e) for e in eye])
    lo = -np.array([support(b, -e) for e in eye])
    return volume_mc(b.contains, lo, hi, budget, rng)


def ball_volume(k):
    """|B_2^k|.  math.gamma is a Lanczos approximation accurate to ~15 digits."""
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)


def sphere_area(n):
    """Surface area of the unit sphere S^{n-1} in R^n."""
    return n * ball_volume(n)


@njit(cache=True)
def _polygon_area(xs, ys):
    m = xs.shape[0]
    # lexicographic (x, y) order from two stable sorts
    by_y = np.argsort(ys, kind="mergesort")
    order = by_y[np.argsort(xs[by_y], kind="mergesort")]
    px = xs[order]
    py = ys[order]
    hx = np.empty(2 * m + 1)
    hy = np.empty(2 * m + 1)
    h = 0
    for i in range(m):
        while h >= 2 and ((hx[h - 1] - hx[h - 2]) * (py[i] - hy[h - 2])
                          - (hy[h - 1] - hy[h - 2]) * (px[i] - hx[h - 2])) <= 0.0:
            h -= 1
        hx[h] = px[i]
        hy[h] = py[i]
        h += 1
    lower = h + 1
    for i in range(m - 2, -1, -1):
        while h >= lower and ((hx[h - 1] - hx[h - 2]) * (py[i] - hy[h - 2])
                              - (hy[h - 1] - hy[h - 2]) * (px[i] - hx[h - 2])) <= 0.0:
            h -= 1
        hx[h] = px[i]
        hy[h] = py[i]
        h += 1
    area = 0.0
    for i in range(h - 1):
        area += hx[i] * hy[i + 1] - hx[i + 1] * hy[i]
    return 0.5 * abs(area)


@njit(cache=True)
def _polygon_areas(pts):
    out = np.empty(pts.shape[0])
    for i in range(pts.shape[0]):
        out[i] = _polygon_area(pts[i, :, 0].copy(), pts[i, :, 1].copy())
    return out


def polygon_areas(points):
    """Areas of the convex hulls of a batch of planar point sets (N, m, 2)."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    return _polygon_areas(pts)
