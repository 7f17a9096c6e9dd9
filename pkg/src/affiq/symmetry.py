"""Chords along a direction, Steiner symmetrals and the maximal shadow system.

For a body K and unit vector u the fiber over y in u^perp is the chord
``{s : y + s u in K} = [lower(y), upper(y)]``.  The shadow system keeps each
fiber's length and moves its midpoint m(y) to t * m(y); t = 0 is the Steiner
symmetral S_u K, t = 1 is K and t = -1 its reflection.

In R^3 the construction is exact: lower and upper are affine over every cell
of the overlay of the projected hull edges, so the fibers over the projected
vertices and the pairwise edge crossings span the body for every |t| <= 1.
In other dimensions the output is an inner approximation spanned by fibers
over projected vertices plus random convex combinations of them.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .bodies import Body, Ellipsoid, VPolytope, reflect
from .errors import GeometryError, NotUnitVector
from .numerics.linalg import as_vector
from .numerics.lp import LPProblem, lp_solve
from .numerics.rng import RngStream

FIBER_EPS = 1e-7
RECHECK_TOL = 1e-9


@dataclass(frozen=True)
class ChordResult:
    lower: float
    upper: float
    y: np.ndarray

    def __post_init__(self):
        if self.lower > self.upper:
            raise GeometryError("chord with lower > upper")

    @property
    def midpoint(self):
        return 0.5 * (self.lower + self.upper)

    @property
    def length(self):
        return self.upper - self.lower

    is_empty = False


@dataclass(frozen=True)
class EmptyChord:
    """The line y + R u misses the body."""

    y: np.ndarray
    is_empty = True
    length = 0.0


def _unit(u, n):
    u = as_vector(u, n)
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise NotUnitVector("direction must be a unit vector")
    return u


def _check_base(u, y):
    if abs(float(u @ y)) > 1e-10 * max(1.0, float(np.linalg.norm(y))):
        raise GeometryError("base point must lie in u^perp")


def chord(b: Body, u, y):
    """Fiber of ``b`` along ``u`` over ``y`` in u^perp."""
    u = _unit(u, b.dim)
    y = as_vector(y, b.dim)
    _check_base(u, y)
    if isinstance(b, VPolytope):
        v = b.hull.vertices
        m = len(v)
        a = np.vstack([np.hstack([v.T, -u[:, None]]), np.append(np.ones(m), 0.0)])
        rhs = np.append(y, 1.0)
        ends = []
        for sign in (1.0, -1.0):
            c = np.zeros(m + 1)
            c[-1] = sign
            res = lp_solve(LPProblem(c, A_eq=a, b_eq=rhs, free=(m,)))
            if not res.optimal:
                return EmptyChord(y)
            ends.append(sign * res.value)
        hi, lo = ends
        return ChordResult(float(lo), float(max(hi, lo)), y)
    if isinstance(b, Ellipsoid):
        # |M^{-1}(y + s u - c)|^2 <= 1 is a quadratic in s
        p = np.linalg.solve(b.shape, y - b.center)
        q = np.linalg.solve(b.shape, u)
        qa, qb, qc = q @ q, 2.0 * p @ q, p @ p - 1.0
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0:
            return EmptyChord(y)
        r = np.sqrt(disc)
        return ChordResult(float((-qb - r) / (2 * qa)), float((-qb + r) / (2 * qa)), y)
    lo, hi = chords_halfspace(b.normals, b.offsets, u, y[None])
    if lo[0] > hi[0]:
        return EmptyChord(y)
    return ChordResult(float(lo[0]), float(hi[0]), y)


def chords_halfspace(normals, offsets, u, Y, tol=1e-12):
    """Closed-form fibers of {x : normals x <= offsets} over base points Y.

    Returns (lower, upper); lower > upper marks an empty fiber.
    """
    Y = np.atleast_2d(Y)
    au = normals @ u
    slack = offsets[None, :] - Y @ normals.T
    scale = np.abs(offsets).max() + 1.0
    lower = np.full(len(Y), -np.inf)
    upper = np.full(len(Y), np.inf)
    pos, neg, flat = au > tol, au < -tol, np.abs(au) <= tol
    if pos.any():
        upper = np.min(slack[:, pos] / au[pos], axis=1)
    if neg.any():
        lower = np.max(slack[:, neg] / au[neg], axis=1)
    if flat.any():
        bad = np.any(slack[:, flat] < -1e-9 * scale, axis=1)
        lower = np.where(bad, np.inf, lower)
        upper = np.where(bad, -np.inf, upper)
    return lower, upper


def chord_lengths(b: Body, u, Y):
    """Batch fiber lengths (0 outside the shadow)."""
    u = _unit(u, b.dim)
    if isinstance(b, Ellipsoid):
        return np.array([chord(b, u, y).length for y in np.atleast_2d(Y)])
    if isinstance(b, VPolytope):
        h = b.hull
        lo, hi = chords_halfspace(h.normals, h.offsets, u, Y)
    else:
        lo, hi = chords_halfspace(b.normals, b.offsets, u, Y)
    return np.clip(hi - lo, 0.0, None)


# ---------------------------------------------------------- base points

def _hull_edges(h):
    d = h.facets.shape[1]
    pairs = set()
    for f in h.facets:
        for i, j in itertools.combinations(range(d), 2):
            a, b = int(f[i]), int(f[j])
            pairs.add((min(a, b), max(a, b)))
    return np.array(sorted(pairs), dtype=int).reshape(-1, 2)


def _segment_crossings(P, Q, block=512):
    """Proper crossings of planar segments P[i] -> Q[i] (all pairs)."""
    d = Q - P
    keep = np.linalg.norm(d, axis=1) > 1e-12
    P, d = P[keep], d[keep]
    out = []
    m = len(P)
    for a in range(0, m, block):
        p, r = P[a:a + block, None, :], d[a:a + block, None, :]
        q, s = P[None, :, :], d[None, :, :]
        den = r[..., 0] * s[..., 1] - r[..., 1] * s[..., 0]
        qp = q - p
        with np.errstate(divide="ignore", invalid="ignore"):
            tt = (qp[..., 0] * s[..., 1] - qp[..., 1] * s[..., 0]) / den
            uu = (qp[..., 0] * r[..., 1] - qp[..., 1] * r[..., 0]) / den
        ok = (np.abs(den) > 1e-14) & (tt > 1e-12) & (tt < 1 - 1e-12) & (uu > 1e-12) & (uu < 1 - 1e-12)
        ii, jj = np.nonzero(ok)
        sel = ii + a < jj
        ii, jj = ii[sel], jj[sel]
        out.append(p[ii, 0] + tt[ii, jj][:, None] * r[ii, 0])
    return np.vstack(out) if out else np.zeros((0, 2))


def base_points(b: VPolytope, u, n_extra, rng: RngStream, exact=True):
    """Base points in u^perp (ambient coordinates) for fiber emission.

    Projected vertices come first, then edge crossings (n = 3, exact mode),
    then ``n_extra`` random convex combinations of three projected vertices.
    The random part depends only on (rng, n_extra).
    """
    u = _unit(u, b.dim)
    n = b.dim
    h = b.hull
    V = h.vertices
    Y = V - np.outer(V @ u, u)
    parts = [Y]
    if exact and n == 3:
        from .numerics.linalg import orthonormal_complement

        B = orthonormal_complement(u)
        E = _hull_edges(h)
        c2 = _segment_crossings(Y[E[:, 0]] @ B, Y[E[:, 1]] @ B)
        parts.append(c2 @ B.T)
    if n_extra:
        g = rng.generator()
        idx = g.integers(0, len(Y), size=(n_extra, 3))
        w = g.dirichlet(np.ones(3), size=n_extra)
        parts.append(np.einsum("mj,mji->mi", w, Y[idx]))
    return np.vstack(parts)


# --------------------------------------------------------- shadow systems

@dataclass(frozen=True, eq=False)
class ShadowBody:
    base: VPolytope
    u: np.ndarray
    t: float
    points: np.ndarray
    body: VPolytope
    exact: bool

    @property
    def vertices(self):
        return self.body.vertices


def _fibers(b: VPolytope, u, Y):
    h = b.hull
    lo, hi = chords_halfspace(h.normals, h.offsets, u, Y)
    scale = float(np.abs(h.vertices).max()) + 1.0
    ok = hi >= lo - 1e-9 * scale
    hi = np.maximum(hi, lo)
    return lo[ok], hi[ok], Y[ok]


def fiber_recheck(sb: ShadowBody):
    """Largest violation of |s - t m(y)| <= l(y)/2 over the output vertices,
    with m and l recomputed from the base body."""
    u, t = sb.u, sb.t
    X = sb.body.vertices
    s = X @ u
    Y = X - np.outer(s, u)
    h = sb.base.hull
    lo, hi = chords_halfspace(h.normals, h.offsets, u, Y)
    m, ell = 0.5 * (lo + hi), hi - lo
    return float(np.max(np.abs(s - t * m) - 0.5 * ell))


def shadow_body(b: VPolytope, u, t, n_extra, rng: RngStream, exact=True) -> ShadowBody:
    """K_u(t): fibers [t m(y) - l(y)/2, t m(y) + l(y)/2]."""
    if not isinstance(b, VPolytope):
        raise GeometryError("shadow systems are built from V-polytopes")
    u = _unit(u, b.dim)
    t = float(t)
    if not -1.0 <= t <= 1.0:
        raise GeometryError("t must lie in [-1, 1]")
    is_exact = exact and b.dim == 3
    if t == 1.0:
        pts = b.hull.vertices
        return ShadowBody(b, u, t, pts, VPolytope(pts), True)
    if t == -1.0:
        r = reflect(b, u)
        return ShadowBody(b, u, t, r.vertices, r, True)
    Y = base_points(b, u, n_extra, rng, exact)
    lo, hi, Y = _fibers(b, u, Y)
    mid, half = t * 0.5 * (lo + hi), 0.5 * (hi - lo)
    pts = np.vstack([Y + np.outer(mid - half, u), Y + np.outer(mid + half, u)])
    body = VPolytope(pts).reduced()
    sb = ShadowBody(b, u, t, pts, body, is_exact)
    scale = float(np.abs(b.vertices).max()) + 1.0
    if fiber_recheck(sb) > RECHECK_TOL * scale:
        raise GeometryError("shadow body vertex outside its fiber")
    return sb


def steiner_symmetral(b: VPolytope, u, n_extra, rng: RngStream, exact=True) -> VPolytope:
    """S_u K (exact in R^3, inner approximation otherwise)."""
    return shadow_body(b, u, 0.0, n_extra, rng, exact).body


def default_extra(n):
    return 2000 if n <= 4 else 8000


__all__ = [
    "ChordResult", "EmptyChord", "chord", "chords_halfspace", "chord_lengths",
    "base_points", "ShadowBody", "fiber_recheck", "shadow_body", "steiner_symmetral",
    "default_extra", "FIBER_EPS",
]
