"""Wedge projection volumes, E-projected polar bodies and the rolodex measure.

For a subspace E of dimension k-1 and x independent of E,
``|P_{E ^ x} K| = |P_{E^perp} x| * |P_{span(E, x)} K|``.  The set
``L_E(K) = {x in E^perp : |P_{E ^ x} K| <= 1}`` is exposed only through its
gauge (the wedge volume itself) since it lives in a different subspace for
every E.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bodies import Body, VPolytope, affine_image, support
from .errors import BadDims, DependentVector, GeometryError
from .grassmann import Subspace, haar_frames, span_of, split_frames
from .hull import convex_hull, sphere_area
from .numerics.linalg import as_vector, qr_orthonormalize
from .numerics.lp import LPProblem, lp_solve
from .numerics.rng import RngStream
from .numerics.stats import Linearized, MCEstimate
from .quermass import projection_volume, projection_volumes
from .symmetry import chords_halfspace

ORTH_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WedgeSpec:
    E: Subspace
    x: np.ndarray
    body: Body

    @property
    def k(self):
        return self.E.k + 1


@dataclass(frozen=True, eq=False)
class RolodexPoint:
    E: Subspace
    x: np.ndarray

    def __post_init__(self):
        x = as_vector(self.x, self.E.n)
        if self.E.k and np.max(np.abs(self.E.frame.T @ x)) > ORTH_TOL * max(1.0, np.linalg.norm(x)):
            raise GeometryError("x must lie in the orthogonal complement of E")
        object.__setattr__(self, "x", x)


def wedge_volume(w: WedgeSpec) -> float:
    b, E = w.body, w.E
    x = as_vector(w.x, b.dim)
    if E.k == 0:
        if not np.any(x):
            raise DependentVector("x must be nonzero")
        return support(b, x) + support(b, -x)
    r = float(np.linalg.norm(E.complement_residual(x)))
    if r <= 1e-12 * max(1.0, float(np.linalg.norm(x))):
        raise DependentVector("x lies in span(E)")
    return r * projection_volume(b, span_of(E, x)).value


def wedge_volumes(b: Body, E_frames, X):
    """Batch wedge volumes for frames (N, n, k-1) and vectors X (N, n)."""
    E_frames = np.asarray(E_frames, dtype=float)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    resid = X - np.einsum("nik,njk,nj->ni", E_frames, E_frames, X)
    r = np.linalg.norm(resid, axis=1)
    if np.any(r <= 1e-12 * np.maximum(1.0, np.linalg.norm(X, axis=1))):
        raise DependentVector("x lies in span(E)")
    frames = np.concatenate([E_frames, (resid / r[:, None])[:, :, None]], axis=2)
    return r * projection_volumes(b, frames)


def le_gauge(b: Body, E: Subspace, x) -> float:
    """Gauge of L_E(K) at x in E^perp (equal to the wedge volume)."""
    p = RolodexPoint(E, x)
    if not np.any(p.x):
        return 0.0
    return wedge_volume(WedgeSpec(E, p.x, b))


def le_membership(b: Body, E: Subspace, x) -> bool:
    return le_gauge(b, E, x) <= 1.0


# ------------------------------------------------------------- Fubini check

def _slice_widths_lp(b: VPolytope, Eframe, xhat, W):
    """Width along xhat of the slices {y in K : P_E y = w} by vertex-weight LPs."""
    V = b.hull.vertices
    m = len(V)
    A = np.vstack([(V @ Eframe).T, np.ones((1, m))])
    out = np.empty(len(W))
    c = V @ xhat
    for i, w in enumerate(W):
        rhs = np.append(w, 1.0)
        hi = lp_solve(LPProblem(c, A_eq=A, b_eq=rhs))
        lo = lp_solve(LPProblem(-c, A_eq=A, b_eq=rhs))
        out[i] = hi.value + lo.value if hi.optimal and lo.optimal else 0.0
    return out


def _slice_widths(b: VPolytope, Eframe, xhat, W):
    n = b.dim
    if Eframe.shape[1] == n - 1:
        # the slice over w is a chord along xhat: closed form from the facets
        h = b.hull
        lo, hi = chords_halfspace(h.normals, h.offsets, xhat, W @ Eframe.T)
        return np.clip(hi - lo, 0.0, None)
    return _slice_widths_lp(b, Eframe, xhat, W)


def _trapezoid(vals, a, b):
    h = (b - a) / (len(vals) - 1)
    return h * (math.fsum(vals[1:-1]) + 0.5 * (vals[0] + vals[-1]))


def _richardson(fn, grid):
    """Trapezoid rule at grid and grid/2, extrapolated in h^2."""
    fine, coarse = fn(grid), fn(grid // 2)
    return fine + (fine - coarse) / 3.0


def fubini_check(b: VPolytope, E: Subspace, x, grid=256):
    """(lhs, rhs) of |P_{E ^ x} K| = integral over w in P_E K of slice widths in x.

    Quadrature is the trapezoid rule on a grid whose endpoints are the exact
    ends of each chord of P_E K; one Richardson step follows.
    """
    if not isinstance(b, VPolytope):
        raise GeometryError("the slice quadrature needs a V-polytope")
    x = as_vector(x, b.dim)
    if E.k not in (1, 2):
        raise BadDims("quadrature is implemented for dim E in {1, 2}")
    p = RolodexPoint(E, x)
    r = float(np.linalg.norm(p.x))
    if r == 0:
        raise DependentVector("x must be nonzero")
    xhat = p.x / r
    lhs = wedge_volume(WedgeSpec(E, p.x, b))
    F = E.frame
    proj = b.hull.vertices @ F
    if E.k == 1:
        a, c = float(proj.min()), float(proj.max())

        def rule(g):
            w = np.linspace(a, c, g + 1)[:, None]
            return _trapezoid(_slice_widths(b, F, xhat, w), a, c)

        rhs = r * _richardson(rule, grid)
        return lhs, rhs
    ph = convex_hull(proj)
    a, c = float(proj[:, 0].min()), float(proj[:, 0].max())
    e2 = np.array([0.0, 1.0])

    def rule(g):
        w1 = np.linspace(a, c, g + 1)
        inner = np.zeros(len(w1))
        for i, s in enumerate(w1):
            lo, hi = chords_halfspace(ph.normals, ph.offsets, e2, np.array([[s, 0.0]]))
            lo, hi = float(lo[0]), float(hi[0])
            if hi <= lo:
                continue
            w2 = np.linspace(lo, hi, g + 1)
            W = np.column_stack([np.full(g + 1, s), w2])
            inner[i] = _trapezoid(_slice_widths(b, F, xhat, W), lo, hi)
        return _trapezoid(inner, a, c)

    rhs = r * _richardson(rule, grid)
    return lhs, rhs


# -------------------------------------------------------- wedge transform

def parallelepiped_factor(xs):
    xs = np.atleast_2d(xs)
    g = xs @ xs.T
    return math.sqrt(max(float(np.linalg.det(g)), 0.0))


def wedge_k_volume(b: Body, xs):
    """|P_{x_1 ^ ... ^ x_k} b| = Delta(x) * |P_{span x} b|."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    frame = qr_orthonormalize(xs.T)
    return parallelepiped_factor(xs) * projection_volume(b, Subspace(frame)).value


def wedge_transform_check(b: VPolytope, T, xs, rng: RngStream | None = None):
    """(lhs, rhs) = (|P_{x_1 ^ .. ^ x_k} T b|, |P_{T^t x_1 ^ .. ^ T^t x_k} b|).

    ``xs`` is a (k, n) array, or an integer k to draw k Gaussian vectors
    from ``rng``.
    """
    T = np.asarray(T, dtype=float)
    if isinstance(xs, (int, np.integer)):
        if rng is None:
            raise ValueError("drawing vectors requires an rng")
        xs = rng.generator().standard_normal((int(xs), b.dim))
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    lhs = wedge_k_volume(affine_image(b, T), xs)
    rhs = wedge_k_volume(b, xs @ T)
    return lhs, rhs


# -------------------------------------------------------- rolodex measure

def mu_linearized(b: Body, u, k, n_samples, rng: RngStream, key="split"):
    """mu_u(L_{k,u}(K)) with the radial integral done in closed form.

    Samples (E, theta) from the split sampler; the estimator is
    ``|S^{n-k}| * mean(weight * |P_{span(E, theta)} K|^{-n}) / n``.
    """
    u = as_vector(u, b.dim)
    n = b.dim
    if not 1 <= k <= n - 1:
        raise BadDims("need 1 <= k <= n - 1")
    E, theta, w = split_frames(u, k, n_samples, rng)
    frames = np.concatenate([E, theta[:, :, None]], axis=2)
    vols = projection_volumes(b, frames, k)
    return Linearized.mean(w * vols ** (-float(n)), key) * (sphere_area(n - k + 1) / n)


def mu_estimate(b: Body, u, n, k, n_samples, rng: RngStream) -> MCEstimate:
    if b.dim != n:
        raise BadDims("body dimension differs from n")
    return mu_linearized(b, u, k, n_samples, rng).estimate(rng.seed)


def q_raw_linearized(b: Body, k, n_samples, rng: RngStream, key="haar"):
    """Mean of |P_F K|^{-n} over Haar F."""
    frames = haar_frames(b.dim, k, n_samples, rng)
    return Linearized.mean(projection_volumes(b, frames, k) ** (-float(b.dim)), key)


def mu_ratio(b: Body, u, k, n_samples, rng: RngStream):
    """mu_u / q_raw; body-independent (it equals c_{n,k} / n up to normalization)."""
    return mu_linearized(b, u, k, n_samples, rng.child("split")) / q_raw_linearized(
        b, k, n_samples, rng.child("haar"))


__all__ = [
    "WedgeSpec", "RolodexPoint", "wedge_volume", "wedge_volumes", "le_gauge",
    "le_membership", "fubini_check", "parallelepiped_factor", "wedge_k_volume",
    "wedge_transform_check", "mu_linearized", "mu_estimate", "q_raw_linearized", "mu_ratio",
]
