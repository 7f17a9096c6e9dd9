"""Projection volumes and L^p-moment quermassintegrals.

``Q_{k,p}(K) = |B^n|/|B^k| * (E_F |P_F K|^p)^{1/p}`` over Haar-random
k-subspaces F; p = 0 is the geometric mean and p = -n gives the affine
quermassintegral Phi_k.  All estimators work on a batch of projection
volumes so that comparisons between bodies, exponents and dimensions can
share the same random subspaces.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bodies import Body, Ellipsoid, HPolytope, minkowski_sum_ball, support
from .errors import BadDims, GeometryError, ZeroVector
from .grassmann import Subspace, haar_frames, sphere_points
from .hull import ball_volume, body_volume, convex_hull, polygon_areas, sphere_area, volume_exact, VolumeResult
from .numerics.linalg import as_vector
from .numerics.rng import RngStream, map_chunks
from .numerics.stats import Linearized, MCEstimate, power_mean

DEFAULT_BUDGET = 200_000
_BLOCK = 8192


@dataclass(frozen=True)
class QuermassSpec:
    body: Body
    k: int
    p: float
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not 1 <= self.k <= self.body.dim:
            raise BadDims("need 1 <= k <= n")


def _as_vpoly(b):
    if isinstance(b, HPolytope):
        return b.to_vpolytope()
    return b


def _cofactor_normals(frames):
    """Unit normals of hyperplanes given by (N, n, n-1) frames."""
    N, n, _ = frames.shape
    out = np.empty((N, n))
    for i in range(n):
        minor = np.delete(frames, i, axis=1)
        out[:, i] = (-1) ** i * np.linalg.det(minor)
    return out / np.linalg.norm(out, axis=1)[:, None]


def hyperplane_shadows(b: Body, normals):
    """|P_{theta^perp} b| for a batch of unit normals (N, n)."""
    th = np.atleast_2d(np.asarray(normals, dtype=float))
    n = b.dim
    if isinstance(b, Ellipsoid):
        c = ball_volume(n - 1)
        if b.is_ball:
            return np.full(len(th), c * b.radius ** (n - 1))
        det = abs(np.linalg.det(b.shape))
        return c * det * np.linalg.norm(np.linalg.solve(b.shape, th.T), axis=0)
    normals, _, areas = _as_vpoly(b).hull.merged_facets
    return 0.5 * (np.abs(th @ normals.T) @ areas)


def projection_volumes(b: Body, frames, k=None, check=True):
    """|P_F b| for a stack of frames (N, n, >=k); the first k columns span F."""
    frames = np.asarray(frames, dtype=float)
    if frames.ndim == 2:
        frames = frames[None]
    N, n, kk = frames.shape
    k = kk if k is None else k
    if n != b.dim or not 1 <= k <= kk:
        raise BadDims("frame shape does not match body dimension")
    if isinstance(b, Ellipsoid):
        if b.is_ball:
            return np.full(N, ball_volume(k) * b.radius ** k)
        G = np.einsum("nik,ij->nkj", frames[:, :, :k], b.shape)
        return ball_volume(k) * np.sqrt(np.linalg.det(G @ np.swapaxes(G, 1, 2)))
    b = _as_vpoly(b)
    V = b.hull.vertices
    if k == n:
        return np.full(N, volume_exact(b.hull).value)

    def block(c, lo, hi):
        F = frames[lo:hi, :, :k]
        if k == 1:
            s = V @ F[:, :, 0].T
            return s.max(axis=0) - s.min(axis=0)
        if k == n - 1:
            nrm = frames[lo:hi, :, n - 1] if kk == n else _cofactor_normals(F)
            return hyperplane_shadows(b, nrm)
        P = np.einsum("mi,Nik->Nmk", V, F)
        if k == 2:
            return polygon_areas(P)
        return np.array([volume_exact(convex_hull(p)).value for p in P])

    # keep the per-block work arrays around a few million entries
    width = len(b.hull.merged_facets[2]) if k == n - 1 else len(V)
    vols = map_chunks(block, N, int(np.clip(4_000_000 // max(width, 1), 256, _BLOCK)))
    if check:
        _check_inradius_bound(b, vols, k)
    return vols


def _check_inradius_bound(b, vols, k):
    rho = b.inball[1]
    floor = ball_volume(k) * rho ** k
    if np.any(vols < floor * (1 - 1e-9)):
        raise GeometryError("projection volume below the inscribed-ball bound")


def projection_volume(b: Body, F: Subspace) -> VolumeResult:
    """|P_F b| by projecting the vertices into F coordinates and taking the
    exact hull volume (closed form for ellipsoids).

    This is the reference path; :func:`projection_volumes` uses faster
    batch formulas and is tested against it.
    """
    if F.n != b.dim:
        raise BadDims("subspace and body dimensions differ")
    if F.k == 0:
        raise BadDims("subspace must have positive dimension")
    if isinstance(b, Ellipsoid):
        return VolumeResult(float(projection_volumes(b, F.frame[None])[0]))
    pts = _as_vpoly(b).hull.vertices @ F.frame
    return volume_exact(convex_hull(pts))


# ------------------------------------------------------------ functionals

def ball_quermass(n, k, volume):
    """Q_{k,p}(B_K) = |B^n|^{(n-k)/n} |K|^{k/n}; independent of p."""
    return ball_volume(n) ** ((n - k) / n) * volume ** (k / n)


def quermass_linearized(vols, n, k, p, key="haar"):
    """Q_{k,p} as a :class:`Linearized` estimate from projection volumes."""
    return power_mean(vols, p, key) * (ball_volume(n) / ball_volume(k))


def normalized_linearized(vols, n, k, p, volume, key="haar"):
    """I_{k,p} = Q_{k,p}(K) / Q_{k,p}(B_K)."""
    if k == n:
        return Linearized.const(1.0)
    return quermass_linearized(vols, n, k, p, key) * (1.0 / ball_quermass(n, k, volume))


def _transform(p):
    if p == 1:
        return "none"
    return "log-mean" if p == 0 else "reciprocal-root"


def q_kp(spec: QuermassSpec, rng: RngStream) -> MCEstimate:
    b, k, p = spec.body, spec.k, spec.p
    n = b.dim
    frames = haar_frames(n, k, spec.budget, rng)
    vols = projection_volumes(b, frames, k)
    return quermass_linearized(vols, n, k, p).estimate(rng.seed, _transform(p), p)


def phi_k(b: Body, k, budget, rng) -> MCEstimate:
    return q_kp(QuermassSpec(b, k, -b.dim, budget), rng)


def i_kp(b: Body, k, p, budget, rng) -> MCEstimate:
    n = b.dim
    vol = body_volume(b, rng=rng.child("volume"))
    if k == n:
        return MCEstimate(1.0, 0.0, budget, rng.seed, _transform(p), p)
    frames = haar_frames(n, k, budget, rng)
    vols = projection_volumes(b, frames, k)
    est = normalized_linearized(vols, n, k, p, vol.value)
    se = est.stderr
    if vol.stderr:
        se = math.hypot(se, abs(est.value) * (k / n) * vol.stderr / vol.value)
    return MCEstimate(est.value, se, budget, rng.seed, _transform(p), p)


# ----------------------------------------------------------- Steiner fit

@dataclass(frozen=True)
class SteinerFit:
    coefficients: np.ndarray  # W_0 .. W_n
    stderr: np.ndarray
    t_grid: np.ndarray
    volumes: np.ndarray
    volume_stderr: np.ndarray


def parallel_volume(b: Body, t, budget, rng: RngStream) -> VolumeResult:
    from .hull import volume_mc

    n = b.dim
    eye = np.eye(n)
    hi = np.array([support(b, e) for e in eye]) + t
    lo = -np.array([support(b, -e) for e in eye]) - t
    return volume_mc(minkowski_sum_ball(b, t), lo, hi, budget, rng)


def steiner_poly_fit(b: Body, t_grid, budget, rng: RngStream) -> SteinerFit:
    """Weighted least-squares fit of |K + tB| = sum_k C(n,k) W_k t^{n-k}.

    Grid points measured with zero Monte Carlo error (t = 0 when the body
    fills its bounding box) enter as exact constraints.
    """
    n = b.dim
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size < n + 2:
        raise BadDims("need more grid points than coefficients")
    res = [parallel_volume(b, t, budget, rng.child(f"t{i}")) for i, t in enumerate(t_grid)]
    y = np.array([r.value for r in res])
    s = np.array([r.stderr for r in res])
    X = np.array([[math.comb(n, k) * t ** (n - k) for k in range(n + 1)] for t in t_grid])
    exact = s == 0
    w = np.where(exact, 0.0, 1.0 / np.where(exact, 1.0, s) ** 2)
    A = X.T @ (w[:, None] * X)
    rhs = X.T @ (w * y)
    C = X[exact]
    m = C.shape[0]
    kkt = np.block([[A, C.T], [C, np.zeros((m, m))]])
    sol = np.linalg.lstsq(kkt, np.concatenate([rhs, y[exact]]), rcond=None)[0]
    coef = sol[: n + 1]
    cov = np.linalg.pinv(kkt)[: n + 1, : n + 1]
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return SteinerFit(coef, se, t_grid, y, s)


# ----------------------------------------------------- polar projection body

def polar_projection_norm(b: Body, x) -> float:
    """Gauge of the polar projection body: |x| * |P_{x^perp} b|."""
    x = as_vector(x, b.dim)
    r = float(np.linalg.norm(x))
    if r == 0:
        raise ZeroVector("x must be nonzero")
    return r * float(hyperplane_shadows(b, x / r)[0])


def polar_projection_gauges(b: Body, X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    r = np.linalg.norm(X, axis=1)
    return r * hyperplane_shadows(b, X / r[:, None])


def polar_projection_linearized(b: Body, thetas, key="sphere"):
    n = b.dim
    shadows = hyperplane_shadows(b, thetas)
    return Linearized.mean(shadows ** (-float(n)), key) * (sphere_area(n) / n)


def polar_projection_volume(b: Body, budget, rng: RngStream) -> MCEstimate:
    """|Pi* K| = (1/n) * integral over the sphere of |P_{theta^perp} K|^{-n}."""
    th = sphere_points(b.dim, budget, rng)
    return polar_projection_linearized(b, th).estimate(rng.seed)


def polar_projection_radial(b: Body, D):
    """Radial function of Pi* K along unit directions D: 1 / |P_{d^perp} K|."""
    return 1.0 / hyperplane_shadows(b, D)


def polar_projection_chords(b: Body, u, Y, iters=80):
    """Chords {s : ||y + s u||_{Pi* K} <= 1} for base points Y (rows in u^perp).

    Every y must lie in Pi* K, so s = 0 is feasible and the gauge is convex
    in s: each end is bracketed by doubling and then bisected.  Returns
    (lower, upper).
    """
    u = as_vector(u, b.dim)
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    g0 = polar_projection_gauges_or_zero(b, Y)
    if np.any(g0 > 1.0 + 1e-12):
        raise GeometryError("base points must lie inside the polar projection body")
    ends = []
    for sign in (1.0, -1.0):
        lo = np.zeros(len(Y))
        hi = np.full(len(Y), 1.0)
        for _ in range(200):
            out = polar_projection_gauges_or_zero(b, Y + sign * hi[:, None] * u) > 1.0
            if out.all():
                break
            hi = np.where(out, hi, 2.0 * hi)
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            inside = polar_projection_gauges_or_zero(b, Y + sign * mid[:, None] * u) <= 1.0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        ends.append(sign * 0.5 * (lo + hi))
    return ends[1], ends[0]


def polar_projection_gauges_or_zero(b: Body, X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    r = np.linalg.norm(X, axis=1)
    out = np.zeros(len(X))
    nz = r > 0
    if nz.any():
        out[nz] = polar_projection_gauges(b, X[nz])
    return out


def polar_projection_from_phi(phi_value, n):
    """|Pi* K| expressed through Phi_{n-1}(K) (probability-normalized sphere)."""
    mean = (phi_value * ball_volume(n - 1) / ball_volume(n)) ** (-float(n))
    return sphere_area(n) / n * mean


__all__ = [
    "QuermassSpec", "projection_volumes", "projection_volume", "hyperplane_shadows",
    "ball_quermass", "quermass_linearized", "normalized_linearized", "q_kp", "phi_k",
    "i_kp", "SteinerFit", "parallel_volume", "steiner_poly_fit", "polar_projection_norm",
    "polar_projection_gauges", "polar_projection_linearized", "polar_projection_volume",
    "polar_projection_from_phi", "polar_projection_radial", "polar_projection_chords",
    "polar_projection_gauges_or_zero", "DEFAULT_BUDGET", "sphere_area", "ball_volume",
]
