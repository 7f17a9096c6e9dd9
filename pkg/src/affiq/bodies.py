"""Convex bodies: V-polytopes, H-polytopes and ellipsoids.

V-polytopes are the primary representation.  H-polytopes only arise as
polars and slab bodies; ellipsoids are exact closed-form bodies.
"""

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numba import njit
from scipy.optimize import linprog

from .errors import (
    DimensionMismatch, GeometryError, NotUnitVector, OriginNotInterior,
    SingularTransform, UnknownName, UnsupportedRepresentation,
)
from .numerics.linalg import as_vector
from .numerics.lp import LPProblem, lp_solve
from .numerics.rng import RngStream

MEMBER_TOL = 1e-9


def _finite_array(a, ndim):
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim or not np.all(np.isfinite(arr)):
        raise ValueError(f"expected a finite array with {ndim} dimensions")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class VPolytope:
    vertices: np.ndarray

    def __post_init__(self):
        v = _finite_array(self.vertices, 2)
        object.__setattr__(self, "vertices", v)
        n = v.shape[1]
        centered = v - v.mean(axis=0)
        if len(v) < n + 1 or np.linalg.matrix_rank(centered, tol=1e-10 * max(1.0, np.abs(centered).max())) < n:
            raise GeometryError("vertices do not span a full-dimensional body")

    @property
    def dim(self):
        return self.vertices.shape[1]

    @cached_property
    def hull(self):
        from .hull import convex_hull

        return convex_hull(self.vertices)

    def reduced(self):
        """Same body with non-extreme points removed."""
        return VPolytope(self.hull.vertices)

    def contains(self, x, tol=MEMBER_TOL):
        """Batch membership through the facet inequalities of the hull."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        h = self.hull
        return np.all(x @ h.normals.T <= h.offsets + tol, axis=1)

    @cached_property
    def inball(self):
        """(center, radius) of a largest inscribed ball."""
        normals, offsets, _ = self.hull.merged_facets
        return _chebyshev(normals, offsets)

    @property
    def centroid(self):
        return self.vertices.mean(axis=0)


@dataclass(frozen=True, eq=False)
class HPolytope:
    """{x : normals @ x <= offsets}; bounded with nonempty interior."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        a = _finite_array(self.normals, 2)
        b = _finite_array(self.offsets, 1)
        if a.shape[0] != b.shape[0]:
            raise DimensionMismatch("row count mismatch")
        object.__setattr__(self, "normals", a)
        object.__setattr__(self, "offsets", b)
        n = a.shape[1]
        for i in range(n):
            for sgn in (1.0, -1.0):
                res = lp_solve(LPProblem(sgn * np.eye(n)[i], A_ub=a, b_ub=b, free=range(n)))
                if not res.optimal:
                    raise GeometryError("H-polytope is empty or unbounded")
        center, r = _chebyshev(a, b)
        if r <= 1e-12:
            raise GeometryError("H-polytope has empty interior")
        object.__setattr__(self, "_inball", (center, r))

    @property
    def dim(self):
        return self.normals.shape[1]

    @property
    def inball(self):
        return self._inball

    def contains(self, x, tol=MEMBER_TOL):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.all(x @ self.normals.T <= self.offsets + tol, axis=1)

    def to_vpolytope(self):
        from scipy.spatial import HalfspaceIntersection

        hs = np.hstack([self.normals, -self.offsets[:, None]])
        pts = HalfspaceIntersection(hs, self.inball[0]).intersections
        return VPolytope(pts).reduced()


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """{center + shape @ v : |v| <= 1}."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = _finite_array(self.center, 1)
        m = _finite_array(self.shape, 2)
        if m.shape != (c.size, c.size):
            raise DimensionMismatch("shape matrix must be n x n")
        if abs(np.linalg.det(m)) <= 1e-12:
            raise GeometryError("ellipsoid shape matrix is singular")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", m)

    @property
    def dim(self):
        return self.center.size

    @property
    def is_ball(self):
        m = self.shape
        d = np.diag(m)
        return bool(np.all(m == np.diag(d)) and np.all(d == d[0]) and d[0] > 0)

    @property
    def radius(self):
        if not self.is_ball:
            raise UnsupportedRepresentation("not a Euclidean ball")
        return float(self.shape[0, 0])

    @property
    def inball(self):
        s = np.linalg.svd(self.shape, compute_uv=False)
        return self.center, float(s[-1])

    def contains(self, x, tol=1e-12):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        v = np.linalg.solve(self.shape, (x - self.center).T).T
        return np.linalg.norm(v, axis=1) <= 1.0 + tol


Body = VPolytope | HPolytope | Ellipsoid


def _chebyshev(a, b):
    """Largest inscribed ball of {x : a x <= b}.

    Solved with HiGHS: hulls of symmetrals carry thousands of facets, which
    is far beyond what the dense tableau solver is meant for.
    """
    n = a.shape[1]
    norms = np.linalg.norm(a, axis=1)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * n + [(0, None)]
    res = linprog(c, A_ub=np.hstack([a, norms[:, None]]), b_ub=b, bounds=bounds, method="highs")
    if res.status != 0 or res.x[-1] <= 0:
        raise GeometryError("could not find an interior point")
    return res.x[:n], float(res.x[-1])


def _check_dim(b, x):
    return as_vector(x, b.dim)


def support(b: Body, x) -> float:
    """h_b(x) = max over y in b of <x, y>."""
    x = _check_dim(b, x)
    if isinstance(b, VPolytope):
        return float(np.max(b.vertices @ x))
    if isinstance(b, Ellipsoid):
        return float(b.center @ x + np.linalg.norm(b.shape.T @ x))
    n = b.dim
    res = lp_solve(LPProblem(x, A_ub=b.normals, b_ub=b.offsets, free=range(n)))
    return res.value


def membership(b: Body, x) -> bool:
    x = _check_dim(b, x)
    if isinstance(b, VPolytope):
        v = b.vertices
        m = len(v)
        a = np.vstack([v.T, np.ones((1, m))])
        res = lp_solve(LPProblem(np.zeros(m), A_eq=a, b_eq=np.append(x, 1.0)))
        return res.optimal
    return bool(b.contains(x)[0])


def polar(p: VPolytope) -> HPolytope:
    """{x : <v_i, x> <= 1 for every vertex v_i}."""
    if not isinstance(p, VPolytope):
        raise UnsupportedRepresentation("polar is defined here for V-polytopes")
    if not np.all(p.hull.offsets > MEMBER_TOL):
        raise OriginNotInterior("origin is not strictly inside the polytope")
    v = p.hull.vertices
    return HPolytope(v, np.ones(len(v)))


def difference_body(b: Body) -> VPolytope:
    if not isinstance(b, VPolytope):
        raise UnsupportedRepresentation("difference body needs a V-polytope")
    v = b.hull.vertices
    diffs = (v[:, None, :] - v[None, :, :]).reshape(-1, b.dim)
    return VPolytope(diffs).reduced()


def affine_image(b: Body, T, v=None) -> Body:
    """Image of ``b`` under x -> T x + v."""
    T = np.asarray(T, dtype=float)
    n = b.dim
    if T.shape != (n, n):
        raise DimensionMismatch("transform must be n x n")
    v = np.zeros(n) if v is None else _check_dim(b, v)
    s = np.linalg.svd(T, compute_uv=False)
    if s[-1] <= 1e-12 * max(1.0, s[0]):
        raise SingularTransform("transform is not invertible")
    if isinstance(b, VPolytope):
        return VPolytope(b.vertices @ T.T + v)
    if isinstance(b, Ellipsoid):
        return Ellipsoid(T @ b.center + v, T @ b.shape)
    a = np.linalg.solve(T.T, b.normals.T).T
    return HPolytope(a, b.offsets + a @ v)


def reflection_matrix(u):
    u = as_vector(u)
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise NotUnitVector("reflection direction must be a unit vector")
    return np.eye(u.size) - 2.0 * np.outer(u, u)


def reflect(b: Body, u) -> Body:
    """Reflection about the hyperplane u^perp."""
    return affine_image(b, reflection_matrix(_check_dim(b, u)))


def translate(b: Body, v) -> Body:
    return affine_image(b, np.eye(b.dim), v)


def scale(b: Body, lam) -> Body:
    return affine_image(b, lam * np.eye(b.dim))


# ---------------------------------------------------------------- distances

@njit(cache=True)
def _fw_bounds(V, x, t, tol, max_iter):
    """Away-step Frank-Wolfe for dist(x, conv V); returns (lower, upper)."""
    m, n = V.shape
    best = 0
    bestd = np.inf
    for j in range(m):
        d = 0.0
        for i in range(n):
            d += (V[j, i] - x[i]) ** 2
        if d < bestd:
            bestd = d
            best = j
    lam = np.zeros(m)
    lam[best] = 1.0
    p = V[best].copy()
    lo = 0.0
    hi = np.sqrt(bestd)
    dots = np.empty(m)
    for _ in range(max_iter):
        g = p - x
        gn2 = 0.0
        gp = 0.0
        gx = 0.0
        for i in range(n):
            gn2 += g[i] * g[i]
            gp += g[i] * p[i]
            gx += g[i] * x[i]
        hi = np.sqrt(gn2)
        if hi == 0.0:
            return 0.0, 0.0
        s = 0
        a = -1
        for j in range(m):
            d = 0.0
            for i in range(n):
                d += V[j, i] * g[i]
            dots[j] = d
            if d < dots[s]:
                s = j
            if lam[j] > 0.0 and (a < 0 or d > dots[a]):
                a = j
        # separating-hyperplane certificate in direction (x - p)/|x - p|
        sep = (dots[s] - gx) / hi
        if sep > lo:
            lo = sep
        if t >= 0.0 and (hi <= t + tol or lo > t + tol):
            break
        if hi - lo <= tol:
            break
        gap_fw = gp - dots[s]
        gap_aw = dots[a] - gp
        if gap_fw >= gap_aw:
            dvec = V[s] - p
            gmax = 1.0
            away = False
        else:
            dvec = p - V[a]
            gmax = lam[a] / (1.0 - lam[a]) if lam[a] < 1.0 else 1e300
            away = True
        dd = 0.0
        gd = 0.0
        for i in range(n):
            dd += dvec[i] * dvec[i]
            gd += g[i] * dvec[i]
        if dd == 0.0:
            break
        gamma = -gd / dd
        if gamma < 0.0:
            gamma = 0.0
        if gamma > gmax:
            gamma = gmax
        for i in range(n):
            p[i] += gamma * dvec[i]
        if away:
            for j in range(m):
                lam[j] *= 1.0 + gamma
            lam[a] -= gamma
            if lam[a] < 1e-15:
                lam[a] = 0.0
        else:
            for j in range(m):
                lam[j] *= 1.0 - gamma
            lam[s] += gamma
    return lo, hi


@njit(cache=True)
def _fw_batch(V, X, t, tol, max_iter):
    out = np.empty((X.shape[0], 2))
    for k in range(X.shape[0]):
        lo, hi = _fw_bounds(V, X[k], t, tol, max_iter)
        out[k, 0] = lo
        out[k, 1] = hi
    return out


def polytope_distance(p: VPolytope, x, tol=1e-8, max_iter=10_000):
    """Certified bounds (lower, upper) on dist(x, p) for a batch of points."""
    X = np.atleast_2d(np.asarray(x, dtype=float))
    V = np.ascontiguousarray(p.hull.vertices)
    return _fw_batch(V, np.ascontiguousarray(X), -1.0, tol, max_iter)


def ellipsoid_distance(e: Ellipsoid, x, iters=200):
    X = np.atleast_2d(np.asarray(x, dtype=float))
    d = X - e.center
    if e.is_ball:
        return np.maximum(np.linalg.norm(d, axis=1) - e.radius, 0.0)
    U, S, Wt = np.linalg.svd(e.shape)
    dp = d @ U
    inside = np.linalg.norm(dp / S, axis=1) <= 1.0
    lo = np.zeros(len(X))
    hi = np.full(len(X), float(np.max(np.abs(S * dp).sum(axis=1))) + 1.0)
    # secular equation sum (s d / (s^2 + lam))^2 = 1, decreasing in lam
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        f = np.sum((S * dp / (S ** 2 + mid[:, None])) ** 2, axis=1)
        big = f > 1.0
        lo = np.where(big, mid, lo)
        hi = np.where(big, hi, mid)
    lam = 0.5 * (lo + hi)
    v = S * dp / (S ** 2 + lam[:, None])
    v /= np.linalg.norm(v, axis=1)[:, None]
    dist = np.linalg.norm(S * v - dp, axis=1)
    return np.where(inside, 0.0, dist)


class ParallelBody:
    """Membership oracle for the outer parallel body b + t B_2^n."""

    def __init__(self, b: Body, t: float, tol=1e-8, max_iter=10_000):
        if t < 0:
            raise ValueError("t must be nonnegative")
        if isinstance(b, HPolytope):
            raise UnsupportedRepresentation("parallel body of an H-polytope")
        self.body, self.t, self.tol, self.max_iter = b, float(t), tol, max_iter

    @property
    def dim(self):
        return self.body.dim

    def distance_bounds(self, x):
        if isinstance(self.body, Ellipsoid):
            d = ellipsoid_distance(self.body, x)
            return np.column_stack([d, d])
        return polytope_distance(self.body, x, self.tol, self.max_iter)

    def contains(self, x):
        X = np.atleast_2d(np.asarray(x, dtype=float))
        inside = self.body.contains(X)
        if self.t == 0.0:
            return inside
        out = inside.copy()
        rest = np.nonzero(~inside)[0]
        if rest.size:
            if isinstance(self.body, Ellipsoid):
                out[rest] = ellipsoid_distance(self.body, X[rest]) <= self.t
            else:
                V = np.ascontiguousarray(self.body.hull.vertices)
                b = _fw_batch(V, np.ascontiguousarray(X[rest]), self.t, self.tol, self.max_iter)
                # unresolved points fall back on the midpoint of the certified interval
                out[rest] = np.where(b[:, 1] <= self.t + self.tol, True,
                                     np.where(b[:, 0] > self.t + self.tol, False,
                                              0.5 * (b[:, 0] + b[:, 1]) <= self.t))
        return out

    __call__ = contains


def minkowski_sum_ball(b: Body, t: float) -> ParallelBody:
    return ParallelBody(b, t)


# --------------------------------------------------------------- generators

def _rng_for(rng, seed):
    if rng is not None:
        return rng
    return RngStream(0 if seed is None else int(seed), 0x626F6479)


def standard_body(name, n, rng=None, **params) -> Body:
    """Named generators: cube, box, simplex, cross-polytope, random-poly,
    ball-polytope, ball, ellipsoid.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if name == "cube":
        side = float(params.get("side", 1.0))
        lo = -side / 2 if params.get("centered") else 0.0
        v = np.array(list(itertools.product([lo, lo + side], repeat=n)))
        return VPolytope(v)
    if name == "box":
        sides = np.asarray(params.get("sides", np.arange(1, n + 1)), dtype=float)
        if sides.size != n or np.any(sides <= 0):
            raise ValueError("box needs n positive side lengths")
        v = np.array(list(itertools.product([0.0, 1.0], repeat=n))) * sides
        if params.get("centered"):
            v = v - sides / 2
        return VPolytope(v)
    if name == "simplex":
        return VPolytope(np.vstack([np.zeros(n), np.eye(n)]))
    if name == "cross-polytope":
        return VPolytope(np.vstack([np.eye(n), -np.eye(n)]))
    if name == "random-poly":
        m = int(params.get("m", 2 * n + 4))
        g = _rng_for(rng, params.get("seed")).generator().standard_normal((m, n))
        return VPolytope(g).reduced()
    if name == "ball-polytope":
        m = int(params.get("m", 400))
        g = _rng_for(rng, params.get("seed")).generator().standard_normal((m, n))
        g /= np.linalg.norm(g, axis=1)[:, None]
        return VPolytope(g * float(params.get("radius", 1.0))).reduced()
    if name == "ball":
        r = float(params.get("radius", 1.0))
        return Ellipsoid(np.asarray(params.get("center", np.zeros(n)), dtype=float), r * np.eye(n))
    if name == "ellipsoid":
        shape = params.get("shape")
        if shape is None:
            shape = np.diag(params.get("axes", np.ones(n)))
        shape = np.asarray(shape, dtype=float)
        if shape.ndim == 1:
            shape = np.diag(shape)
        return Ellipsoid(np.asarray(params.get("center", np.zeros(n)), dtype=float), shape)
    raise UnknownName(f"unknown body kind {name!r}")


# ------------------------------------------------------------ serialization

def body_to_dict(b: Body) -> dict:
    if isinstance(b, VPolytope):
        return {"kind": "vpoly", "dim": b.dim, "vertices": b.vertices.tolist()}
    if isinstance(b, HPolytope):
        rows = [{"normal": a.tolist(), "offset": float(o)} for a, o in zip(b.normals, b.offsets)]
        return {"kind": "hpoly", "dim": b.dim, "rows": rows}
    return {"kind": "ellipsoid", "dim": b.dim, "center": b.center.tolist(), "shape": b.shape.tolist()}


def body_from_dict(d: dict) -> Body:
    kind = d.get("kind")
    if kind == "vpoly":
        b = VPolytope(d["vertices"])
    elif kind == "hpoly":
        b = HPolytope([r["normal"] for r in d["rows"]], [r["offset"] for r in d["rows"]])
    elif kind == "ellipsoid":
        b = Ellipsoid(d["center"], d["shape"])
    else:
        raise UnknownName(f"unknown body kind {kind!r}")
    if "dim" in d and int(d["dim"]) != b.dim:
        raise DimensionMismatch("declared dim does not match data")
    return b


def dumps(b: Body) -> str:
    """JSON text; Python's float repr round-trips doubles bit-exactly."""
    return json.dumps(body_to_dict(b), sort_keys=True)


def loads(text: str) -> Body:
    return body_from_dict(json.loads(text))


def width(b: Body, x) -> float:
    """h_b(x) + h_b(-x)."""
    x = _check_dim(b, x)
    return support(b, x) + support(b, -x)


def equal_volume_radius(volume, n):
    from .hull import ball_volume

    return (volume / ball_volume(n)) ** (1.0 / n)


__all__ = [
    "VPolytope", "HPolytope", "Ellipsoid", "Body", "support", "membership", "polar",
    "difference_body", "affine_image", "reflect", "reflection_matrix", "translate",
    "scale", "minkowski_sum_ball", "ParallelBody", "polytope_distance",
    "ellipsoid_distance", "standard_body", "body_to_dict", "body_from_dict", "dumps",
    "loads", "width", "equal_volume_radius",
]
