"""Verification suites.

Each suite takes a catalog, a per-sample budget and an :class:`RngStream`
and returns a :class:`SuiteReport`.  Comparisons between bodies of the same
dimension evaluate every functional on one shared set of Haar rotations (or
sphere points), so reported standard errors are those of the paired
differences.
"""

import itertools
import math
import time

import numpy as np

from ..bodies import Ellipsoid, HPolytope, VPolytope, affine_image, polar, scale, standard_body, translate
from ..grassmann import Subspace, bp_samples, bp_ratio, haar_orthogonal, sphere_points
from ..hull import ball_volume, body_volume, volume_exact, sphere_area
from ..numerics.linalg import orthonormal_complement
from ..numerics.rng import RngStream
from ..numerics.stats import Linearized
from ..quermass import (ball_quermass, normalized_linearized, polar_projection_chords,
                        polar_projection_linearized, polar_projection_radial, projection_volume,
                        projection_volumes, quermass_linearized, steiner_poly_fit)
from ..rolodex import (fubini_check, le_gauge, mu_ratio, mu_linearized, wedge_transform_check)
from ..symmetry import default_extra, shadow_body, steiner_symmetral
from .catalog import BodyCatalog
from .report import BAND, EQ, GEQ, INFO, STRICT, CaseRecord, SuiteReport

T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


# ----------------------------------------------------------------- helpers

def _rotations(n, budget, rng):
    return haar_orthogonal(n, budget, rng.child(f"haar-{n}"))


def _phi(b, Q, k, key="haar"):
    n = b.dim
    return quermass_linearized(projection_volumes(b, Q, k), n, k, -n, key)


def _directions(rng, label, count, n):
    g = rng.child(label).generator().standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1)[:, None]


def _volume(b):
    return body_volume(b).value


def _rec(report, lin, **kw):
    """Record a Linearized margin (lhs and rhs given separately)."""
    return report.add(CaseRecord(stderr=lin.stderr, **kw))


# ------------------------------------------------------------ exact layer

def suite_exact_geometry(catalog, budget, rng, **opts):
    rep = SuiteReport("exact-geometry", rng.seed, budget)
    for n in (3, 4):
        closed = {"cube": 1.0, "simplex": 1.0 / math.factorial(n),
                  "cross-polytope": 2.0 ** n / math.factorial(n)}
        for kind, exact in closed.items():
            v = volume_exact(standard_body(kind, n).hull).value
            rep.add(CaseRecord(f"volume/{kind}/n{n}", kind, v, exact, 0.0, EQ, n=n, floor=1e-12))
        cube = standard_body("cube", n)
        thetas = _directions(rng, f"theta-{n}", 100, n)
        worst, lhs, rhs = -1.0, 0.0, 0.0
        for th in thetas:
            val = projection_volume(cube, Subspace(orthonormal_complement(th))).value
            ref = float(np.abs(th).sum())
            if abs(val - ref) > worst:
                worst, lhs, rhs = abs(val - ref), val, ref
        rep.add(CaseRecord(f"cube-shadow/n{n}", "cube", lhs, rhs, 0.0, EQ, n=n, k=n - 1,
                           floor=1e-9, notes={"directions": 100, "max_abs_error": worst}))
    return rep


def suite_kubota(catalog, budget, rng, body="cube3", **opts):
    rep = SuiteReport("kubota", rng.seed, budget, {"body": body})
    b = catalog.get(body)
    n = b.dim
    Q = _rotations(n, budget, rng)
    w2 = quermass_linearized(projection_volumes(b, Q, n - 1), n, n - 1, 1)
    # surface area of the unit cube is 6, so W_{n-1} = S / n = 2
    target = 2.0 if body == "cube3" else w2.value
    rep.add(CaseRecord("kubota/W2", body, w2.value, target, w2.stderr, EQ, n=n, k=n - 1, p=1,
                       floor=0.01 * target))
    t_grid = np.linspace(0.0, 2.0, 9)
    fit = steiner_poly_fit(b, t_grid, budget, rng.child("steiner"))
    vol = _volume(b)
    expect = {0: (ball_volume(n), 0.03), n - 1: (w2.value if body != "cube3" else 2.0, 0.05),
              n: (vol, 0.03)}
    for i, (ref, tol) in sorted(expect.items()):
        rep.add(CaseRecord(f"steiner-fit/W{i}", body, float(fit.coefficients[i]), ref, 0.0, EQ,
                           n=n, floor=tol * abs(ref),
                           notes={"fit_stderr": float(fit.stderr[i])}))
    for i in range(1, n - 1):
        rep.add(CaseRecord(f"steiner-fit/W{i}", body, float(fit.coefficients[i]), float("nan"),
                           float(fit.stderr[i]), INFO, n=n, margin=0.0))
    rep.params["t_grid"] = t_grid.tolist()
    return rep


# ------------------------------------------------------------------ Lutwak

LUTWAK_DEFAULT = {
    3: ["cube3", "simplex3", "rpoly3a", "rpoly3b", "box3a", "box3b", "ellipsoid3a", "ellipsoid3b"],
    4: ["cube4", "simplex4", "rpoly4a", "rpoly4b", "box4a", "box4b", "ellipsoid4a"],
}


def suite_lutwak(catalog, budget, rng, n_values=(3, 4), bodies=None, **opts):
    """Phi_k(K) >= Phi_k(B_K); strict off ellipsoids, equality on them."""
    rep = SuiteReport("lutwak", rng.seed, budget, {"n_values": list(n_values)})
    for n in n_values:
        names = [x for x in bodies if catalog.get(x).dim == n] if bodies else LUTWAK_DEFAULT.get(n, [])
        if not names:
            continue
        Q = _rotations(n, budget, rng)
        for name in names:
            b = catalog.get(name)
            vol = _volume(b)
            ell = isinstance(b, Ellipsoid)
            for k in range(1, n):
                phi = _phi(b, Q, k)
                bound = ball_quermass(n, k, vol)
                _rec(rep, phi, case=f"{name}/k{k}", body=name, lhs=phi.value, rhs=bound,
                     kind=EQ if ell else STRICT, n=n, k=k, p=-n)
    return rep


# -------------------------------------------------------- Steiner / shadows

STEINER_DEFAULT = ["simplex3", "cube3", "rpoly3a", "rpoly3b", "box3a"]


def suite_steiner(catalog, budget, rng, bodies=None, dirs=8, ks=(1, 2), t_grid=T_GRID,
                  n_extra=None, profile_dirs=2, **opts):
    """Phi_k(K) >= Phi_k(S_u K) and monotone shadow profiles."""
    names = bodies or STEINER_DEFAULT
    rep = SuiteReport("steiner", rng.seed, budget,
                      {"dirs": dirs, "ks": list(ks), "t_grid": list(t_grid), "bodies": list(names)})
    for name in names:
        b = catalog.get(name)
        n = b.dim
        extra = default_extra(n) if n_extra is None else n_extra
        Q = _rotations(n, budget, rng)
        U = _directions(rng, f"u-{name}", dirs, n)
        base = {k: _phi(b, Q, k) for k in ks}
        for j, u in enumerate(U):
            S = steiner_symmetral(b, u, extra, rng.child(f"sym-{name}-{j}"))
            for k in ks:
                d = base[k] - _phi(S, Q, k)
                _rec(rep, d, case=f"symmetral/{name}/u{j}/k{k}", body=name, lhs=base[k].value,
                     rhs=base[k].value - d.value, margin=d.value, kind=GEQ, n=n, k=k, p=-n, u=u,
                     notes={"exact_symmetral": n == 3})
            if j < profile_dirs:
                _shadow_profile(rep, f"profile/{name}/u{j}", name, b, u, Q, ks, t_grid, extra,
                                rng.child(f"shadow-{name}-{j}"))
    # control: a body symmetric about u^perp up to translation has S_u K = K + c
    cube = catalog.get("cube3")
    Q = _rotations(3, budget, rng)
    e1 = np.eye(3)[0]
    S = steiner_symmetral(cube, e1, 0, rng.child("control"))
    for k in ks:
        a = _phi(cube, Q, k)
        d = a - _phi(S, Q, k)
        _rec(rep, d, case=f"control/cube3/e1/k{k}", body="cube3", lhs=a.value,
             rhs=a.value - d.value, margin=d.value, kind=EQ, n=3, k=k, p=-3, u=e1)
    return rep


def _shadow_profile(rep, prefix, name, b, u, Q, ks, t_grid, extra, rng, symmetric=False):
    n = b.dim
    bodies = [shadow_body(b, u, t, extra, rng).body for t in t_grid]
    for k in ks:
        vals = [_phi(s, Q, k) for s in bodies]
        for i in range(len(t_grid) - 1):
            d = vals[i + 1] - vals[i]
            _rec(rep, d, case=f"{prefix}/k{k}/t{t_grid[i]:g}-{t_grid[i + 1]:g}", body=name,
                 lhs=vals[i + 1].value, rhs=vals[i].value, margin=d.value, kind=GEQ, n=n, k=k,
                 p=-n, t=float(t_grid[i + 1]), u=u)
        total = vals[-1] - vals[0]
        shape = _profile_shape(vals)
        _rec(rep, total, case=f"{prefix}/k{k}/total", body=name, lhs=vals[-1].value,
             rhs=vals[0].value, margin=total.value, kind=EQ if symmetric else INFO, n=n, k=k,
             p=-n, u=u, notes={"profile": [v.value for v in vals], "shape": shape,
                               "t_grid": list(t_grid)})


def _profile_shape(vals, sigmas=4.0):
    steps = [(vals[i + 1] - vals[i]) for i in range(len(vals) - 1)]
    up = [d.value > sigmas * d.stderr + 1e-12 * abs(vals[0].value) for d in steps]
    if not any(up):
        return "flat"
    first = up.index(True)
    if all(up[first:]):
        return "strict" if first == 0 else "flat-then-strict"
    return "mixed"


DICHOTOMY_DEFAULT = [("simplex3", None), ("rpoly3a", None), ("cube3", 0), ("cross3", 0)]


def suite_dichotomy(catalog, budget, rng, cases=None, ks=(1, 2), t_grid=T_GRID, n_extra=None,
                    bodies=None, **opts):
    """Profiles t -> Phi_k(K_u(t)); u-symmetric bodies must be flat."""
    if cases is None:
        cases = [(b, None) for b in bodies] if bodies else DICHOTOMY_DEFAULT
    rep = SuiteReport("dichotomy", rng.seed, budget, {"ks": list(ks), "t_grid": list(t_grid),
                                                      "cases": [list(c) for c in cases]})
    for name, axis in cases:
        b = catalog.get(name)
        n = b.dim
        u = np.eye(n)[axis] if axis is not None else _directions(rng, f"u-{name}", 1, n)[0]
        Q = _rotations(n, budget, rng)
        extra = default_extra(n) if n_extra is None else n_extra
        _shadow_profile(rep, f"{name}/{'e%d' % axis if axis is not None else 'random'}", name, b,
                        u, Q, ks, t_grid, extra, rng.child(f"shadow-{name}"),
                        symmetric=axis is not None)
    return rep


# ------------------------------------------------------------ L^p structure

AF_DEFAULT = {3: ["cube3", "simplex3", "rpoly3a", "box3a", "ellipsoid3a"],
              4: ["cube4", "simplex4", "rpoly4a", "box4a"]}


def suite_af_chain(catalog, budget, rng, n_values=(3, 4), p_grid=None, bodies=None,
                   explore=False, **opts):
    """I_{k,p}^{1/k} >= I_{m,p}^{1/m} for k < m, m >= -p, p in [-n, 0]."""
    rep = SuiteReport("af-chain", rng.seed, budget, {"n_values": list(n_values),
                                                     "explore": explore})
    for n in n_values:
        ps = sorted({0.0, -1.0, -2.0, float(-n)}) if p_grid is None else sorted(p_grid)
        names = [x for x in bodies if catalog.get(x).dim == n] if bodies else AF_DEFAULT.get(n, [])
        if not names:
            continue
        Q = _rotations(n, budget, rng)
        for name in names:
            b = catalog.get(name)
            vol = _volume(b)
            vols = {k: projection_volumes(b, Q, k) for k in range(1, n)}
            for p in ps:
                if not -n <= p <= 0:
                    continue
                root = {k: normalized_linearized(vols[k], n, k, p, vol).pow(1.0 / k)
                        for k in range(1, n)}
                root[n] = Linearized.const(1.0)
                for k, m in itertools.combinations(range(1, n + 1), 2):
                    proven = m >= -p
                    if not proven and not explore:
                        continue
                    d = root[k] - root[m]
                    _rec(rep, d, case=f"{name}/p{p:g}/k{k}-m{m}", body=name, lhs=root[k].value,
                         rhs=root[m].value, margin=d.value, kind=GEQ if proven else INFO,
                         n=n, k=k, p=p, notes={"m": m})
    return rep


LP_DEFAULT = ["cube3", "simplex3", "rpoly3a", "box3a", "cube4", "simplex4"]


def suite_lp_structure(catalog, budget, rng, bodies=None, **opts):
    """p-monotonicity, the ellipsoid threshold below -n, homogeneity and
    affine invariance of Phi_k."""
    rep = SuiteReport("lp-structure", rng.seed, budget)
    names = bodies or LP_DEFAULT
    for name in names:
        b = catalog.get(name)
        n = b.dim
        Q = _rotations(n, budget, rng)
        ps = [float(-n), -2.0, -1.0, 0.0, 1.0]
        for k in range(1, n):
            vols = projection_volumes(b, Q, k)
            qs = [quermass_linearized(vols, n, k, p) for p in ps]
            for i in range(len(ps) - 1):
                d = qs[i + 1] - qs[i]
                _rec(rep, d, case=f"p-monotone/{name}/k{k}/p{ps[i]:g}-{ps[i + 1]:g}", body=name,
                     lhs=qs[i + 1].value, rhs=qs[i].value, margin=d.value, kind=GEQ, n=n, k=k,
                     p=ps[i + 1])
            q2 = quermass_linearized(projection_volumes(scale(b, 2.0), Q, k), n, k, -n)
            d = q2 - qs[0] * 2.0 ** k
            _rec(rep, d, case=f"homogeneity/{name}/k{k}", body=name, lhs=q2.value,
                 rhs=qs[0].value * 2.0 ** k, margin=d.value, kind=EQ, n=n, k=k, p=-n)
    # ellipsoid: equality at p = -n, failure at p = -(n + 2)
    for name in ("ellipsoid3a",):
        e = catalog.get(name)
        n = e.dim
        Q = _rotations(n, budget, rng)
        vol = _volume(e)
        for k in range(1, n):
            vols = projection_volumes(e, Q, k)
            ball = ball_quermass(n, k, vol)
            for p, kind in ((float(-n), EQ), (float(-(n + 2)), STRICT)):
                q = quermass_linearized(vols, n, k, p)
                tag = "equality" if kind == EQ else "threshold"
                _rec(rep, q, case=f"{tag}/{name}/k{k}/p{p:g}", body=name, lhs=ball, rhs=q.value,
                     kind=kind, n=n, k=k, p=p)
    # affine invariance: independent samples for K and T K, det T = 1
    for name in ("simplex3", "rpoly3a"):
        b = catalog.get(name)
        n = b.dim
        g = rng.child(f"affine-{name}").generator().standard_normal((n, n))
        T = g / abs(np.linalg.det(g)) ** (1.0 / n)
        Tb = affine_image(b, T, np.ones(n))
        for k in range(1, n):
            a = _phi(b, haar_orthogonal(n, budget, rng.child(f"affine-a-{name}")), k, "a")
            c = _phi(Tb, haar_orthogonal(n, budget, rng.child(f"affine-b-{name}")), k, "b")
            d = c - a
            _rec(rep, d, case=f"affine-invariance/{name}/k{k}", body=name, lhs=c.value,
                 rhs=a.value, margin=d.value, kind=EQ, n=n, k=k, p=-n)
    return rep


# --------------------------------------------------------- Loomis-Whitney

LW_DEFAULT = ["cube3", "box3a", "box3b", "simplex3", "rpoly3a", "cross3", "ballpoly3"]
LW_BOXES = {"cube3", "box3a", "box3b", "cube4", "box4a", "box4b", "centered-cube3"}
LW_STRICT = {"cube3", "cube4"}


def suite_loomis_whitney(catalog, budget, rng, bodies=None, k=2, **opts):
    names = bodies or LW_DEFAULT
    rep = SuiteReport("loomis-whitney", rng.seed, budget, {"k": k, "bodies": list(names)})
    for name in names:
        b = catalog.get(name)
        n = b.dim
        vol = _volume(b)
        # (a) classical: product of coordinate hyperplane shadows
        eye = np.eye(n)
        shadows = [projection_volume(b, Subspace(np.delete(eye, i, axis=1))).value
                   for i in range(n)]
        lhs = math.prod(shadows)
        rep.add(CaseRecord(f"classical/{name}", name, lhs, vol ** (n - 1), 0.0,
                           EQ if name in LW_BOXES else GEQ, n=n, k=n - 1,
                           notes={"shadows": shadows}))
        # (b) averaged over rotations of the coordinate k-subspaces
        Q = _rotations(n, budget, rng)
        subsets = list(itertools.combinations(range(n), k))
        logs = sum(np.log(projection_volumes(b, Q[:, :, list(I)], k)) for I in subsets)
        avg = Linearized.mean(logs, "haar").exp()
        c_nk, c_lower = math.comb(n, k), math.comb(n - 1, k - 1)
        bound = ball_volume(k) ** c_nk * (vol / ball_volume(n)) ** c_lower
        if name.startswith("ballpoly"):
            # K inside the unit ball caps every shadow at |B^k|
            floor = bound * ((ball_volume(n) / vol) ** c_lower - 1.0)
            _rec(rep, avg, case=f"averaged/{name}", body=name, lhs=avg.value, rhs=bound,
                 kind=BAND, n=n, k=k, floor=floor)
        else:
            _rec(rep, avg, case=f"averaged/{name}", body=name, lhs=avg.value, rhs=bound,
                 kind=STRICT if name in LW_STRICT else GEQ, n=n, k=k)
        # (c) W_k >= Q_{k,0} >= ball value
        vols = projection_volumes(b, Q, k)
        w = quermass_linearized(vols, n, k, 1)
        q0 = quermass_linearized(vols, n, k, 0)
        d = w - q0
        _rec(rep, d, case=f"chain/{name}/W-Q0", body=name, lhs=w.value, rhs=q0.value,
             margin=d.value, kind=GEQ, n=n, k=k, p=0)
        _rec(rep, q0, case=f"chain/{name}/Q0-ball", body=name, lhs=q0.value,
             rhs=ball_quermass(n, k, vol), kind=GEQ, n=n, k=k, p=0)
    return rep


# ------------------------------------------------------------------ Petty

PETTY_DEFAULT = ["simplex3", "cube3", "rpoly3a"]


def suite_petty(catalog, budget, rng, bodies=None, dirs=4, n_chords=50, n_extra=None, **opts):
    """|Pi* K| <= |Pi* S_u K| globally and chord by chord."""
    names = bodies or PETTY_DEFAULT
    rep = SuiteReport("petty", rng.seed, budget, {"dirs": dirs, "n_chords": n_chords,
                                                  "bodies": list(names)})
    ball = catalog.get("ball3")
    th = sphere_points(3, budget, rng.child("sphere-3"))
    pb = polar_projection_linearized(ball, th)
    exact = ball_volume(3) * ball_volume(2) ** -3
    _rec(rep, pb, case="calibration/ball3", body="ball3", lhs=pb.value, rhs=exact, kind=EQ, n=3)
    for name in names:
        b = catalog.get(name)
        n = b.dim
        extra = default_extra(n) if n_extra is None else n_extra
        th = sphere_points(n, budget, rng.child(f"sphere-{n}"))
        base = polar_projection_linearized(b, th)
        for j, u in enumerate(_directions(rng, f"u-{name}", dirs, n)):
            S = steiner_symmetral(b, u, extra, rng.child(f"sym-{name}-{j}"))
            d = polar_projection_linearized(S, th) - base
            _rec(rep, d, case=f"global/{name}/u{j}", body=name, lhs=base.value + d.value,
                 rhs=base.value, margin=d.value, kind=GEQ, n=n, u=u,
                 notes={"exact_symmetral": n == 3})
            # chords parallel to u through random points of Pi* K in u^perp
            g = rng.child(f"chords-{name}-{j}").generator()
            B = orthonormal_complement(u)
            D = g.standard_normal((n_chords, n - 1))
            D = (D / np.linalg.norm(D, axis=1)[:, None]) @ B.T
            radii = polar_projection_radial(b, D) * g.random(n_chords)
            radii[0] = 0.0  # the chord through the origin
            Y = D * radii[:, None]
            lo_k, hi_k = polar_projection_chords(b, u, Y)
            lo_s, hi_s = polar_projection_chords(S, u, Y)
            gap = (hi_s - lo_s) - (hi_k - lo_k)
            i = int(np.argmin(gap))
            scale_ = float(np.max(hi_s - lo_s))
            rep.add(CaseRecord(f"chords/{name}/u{j}", name, float(hi_s[i] - lo_s[i]),
                               float(hi_k[i] - lo_k[i]), 0.0, GEQ, n=n, u=u, margin=float(gap[i]),
                               floor=4.0 * 1e-12 * scale_,
                               notes={"n_chords": n_chords, "origin_gap": float(gap[0])}))
    return rep


# -------------------------------------------------------------- local min

def suite_local_min(catalog, budget, rng, base="ballpoly3", ks=(1, 2),
                    eps_grid=(0.0, 0.05, 0.1, 0.2), **opts):
    """Non-affine perturbations of a near-ball raise I_{k,-n}; affine ones do not."""
    rep = SuiteReport("local-min", rng.seed, budget, {"base": base, "eps_grid": list(eps_grid),
                                                      "ks": list(ks)})
    b0 = catalog.get(base)
    n = b0.dim
    Q = _rotations(n, budget, rng)
    target = ball_volume(n)

    def renorm(b):
        return scale(b, (target / _volume(b)) ** (1.0 / n))

    def index(b, k):
        return normalized_linearized(projection_volumes(b, Q, k), n, k, -n, _volume(b))

    for k in ks:
        ctrl = index(b0, k)
        floor = max(ctrl.value - 1.0, 0.0)
        rep.add(CaseRecord(f"control/k{k}", base, ctrl.value, 1.0, ctrl.stderr, INFO, n=n, k=k,
                           p=-n, t=0.0, notes={"role": "approximation floor"}))
        for eps in eps_grid:
            if eps == 0:
                continue
            xi = rng.child(f"eps-{eps:g}").generator().uniform(-1.0, 1.0, len(b0.vertices))
            pert = renorm(VPolytope(b0.vertices * (1.0 + eps * xi)[:, None]).reduced())
            ix = index(pert, k)
            _rec(rep, ix, case=f"perturbed/k{k}/eps{eps:g}", body=base, lhs=ix.value, rhs=1.0,
                 kind=GEQ, n=n, k=k, p=-n, t=eps, floor=floor)
            if eps >= 0.1:
                d = ix - ctrl
                _rec(rep, d, case=f"perturbed-strict/k{k}/eps{eps:g}", body=base, lhs=ix.value,
                     rhs=ctrl.value, margin=d.value, kind=STRICT, n=n, k=k, p=-n, t=eps)
        stretch = Ellipsoid(np.zeros(n), np.diag([1.2] + [1.0] * (n - 1)))
        ie = index(stretch, k)
        _rec(rep, ie, case=f"ellipsoid-stretch/k{k}/eps0.2", body="ellipsoid", lhs=ie.value,
             rhs=1.0, kind=EQ, n=n, k=k, p=-n, t=0.2)
    return rep


# ------------------------------------------------------------------- slabs

SLAB_DEFAULT = ["cube3", "simplex3", "rpoly3a", "rpoly3b", "cross3"]
SYMMETRIC = {"cube3", "cross3", "centered-cube3", "cube4", "cross4", "box3a", "box3b"}


def suite_slab(catalog, budget, rng, bodies=None, m_dirs=200, **opts):
    """|K| <= |K~_m| for the slab body, and Phi_1(K) >= Phi_1(B_K)."""
    names = bodies or SLAB_DEFAULT
    rep = SuiteReport("slab", rng.seed, budget, {"m_dirs": m_dirs, "bodies": list(names)})
    for name in names:
        b = catalog.get(name)
        n = b.dim
        c = b.hull.vertices.mean(axis=0)
        K = translate(b, -c)
        th = sphere_points(n, m_dirs, rng.child(f"slab-{n}"))
        widths = np.array([_width(K, t) for t in th])
        slab = HPolytope(np.vstack([th, -th]), np.concatenate([widths, widths]) / 2.0)
        vol_k, vol_s = _volume(K), volume_exact(slab.to_vpolytope().hull).value
        rep.add(CaseRecord(f"volume/{name}", name, vol_s, vol_k, 0.0, GEQ, n=n,
                           notes={"m_dirs": m_dirs}))
        if name in SYMMETRIC:
            excess = float(np.max(K.vertices @ th.T - widths / 2.0))
            rep.add(CaseRecord(f"containment/{name}", name, 0.0, excess, 0.0, GEQ, n=n,
                               notes={"max_excess": excess}))
        Q = _rotations(n, budget, rng)
        phi = _phi(K, Q, 1)
        _rec(rep, phi, case=f"phi1/{name}", body=name, lhs=phi.value,
             rhs=ball_quermass(n, 1, vol_k), kind=GEQ, n=n, k=1, p=-n)
    return rep


def _width(b, t):
    s = b.vertices @ t
    return float(s.max() - s.min())


# ---------------------------------------------------- Blaschke-Petkantschin

BP_DEFAULT = ((3, 2), (4, 2), (4, 3))


def _bp_functions(n):
    cube = standard_body("cube", n)
    simplex = standard_body("simplex", n)
    ell = standard_body("ellipsoid", n, axes=np.linspace(0.5, 2.0, n))
    a = np.arange(1.0, n + 1.0)
    a /= np.linalg.norm(a)
    return {
        "one": lambda F: np.ones(len(F)),
        "cube-shadow": lambda F: projection_volumes(cube, F),
        "simplex-shadow-inv": lambda F: 1.0 / projection_volumes(simplex, F),
        "gauss-a": lambda F: np.exp(-np.sum(np.einsum("nik,i->nk", F, a) ** 2, axis=1)),
        "ellipsoid-shadow-sq": lambda F: projection_volumes(ell, F) ** 2,
    }


def suite_bp(catalog, budget, rng, nk=BP_DEFAULT, **opts):
    """mean_split(f w) / mean_haar(f) does not depend on f."""
    rep = SuiteReport("bp", rng.seed, budget, {"nk": [list(x) for x in nk]})
    for n, k in nk:
        u = _directions(rng, f"u-{n}-{k}", 1, n)[0]
        fs = _bp_functions(n)
        names = list(fs)
        lhs, rhs, w = bp_samples([fs[x] for x in names], u, k, budget, rng.child(f"bp-{n}-{k}"))
        ratios = [bp_ratio(lhs[i], rhs[i], w) for i in range(len(names))]
        ref = ratios[0]
        rep.add(CaseRecord(f"n{n}k{k}/constant", "none", ref.value, float("nan"), ref.stderr,
                           INFO, n=n, k=k, u=u, margin=0.0))
        for name, r in zip(names[1:], ratios[1:]):
            d = r - ref
            _rec(rep, d, case=f"n{n}k{k}/{name}", body=name, lhs=r.value, rhs=ref.value,
                 margin=d.value, kind=EQ, n=n, k=k, u=u)
    return rep


# ----------------------------------------------------------------- rolodex

MU_DEFAULT = ((3, 2), (4, 2), (4, 3))


def suite_rolodex(catalog, budget, rng, nk=MU_DEFAULT, bodies=("ball", "cube", "simplex"),
                  **opts):
    """Body independence of mu_u / mean |P_F K|^{-n}; Fubini and wedge identities."""
    rep = SuiteReport("rolodex", rng.seed, budget, {"nk": [list(x) for x in nk]})
    for n, k in nk:
        u = _directions(rng, f"u-{n}-{k}", 1, n)[0]
        sub = rng.child(f"mu-{n}-{k}")
        ratios = {name: mu_ratio(standard_body(name, n), u, k, budget, sub) for name in bodies}
        ref_name = bodies[0]
        ref = ratios[ref_name]
        rep.add(CaseRecord(f"mu/n{n}k{k}/{ref_name}", ref_name, ref.value, float("nan"),
                           ref.stderr, INFO, n=n, k=k, u=u, margin=0.0))
        for name in bodies[1:]:
            d = ratios[name] - ref
            _rec(rep, d, case=f"mu/n{n}k{k}/{name}", body=name, lhs=ratios[name].value,
                 rhs=ref.value, margin=d.value, kind=EQ, n=n, k=k, u=u)
    # k = 1: the rolodex measure is |(K - K)°|, integrated directly on the sphere
    cube = standard_body("cube", 3, centered=True, side=2.0)
    e1 = np.eye(3)[0]
    mu1 = mu_linearized(cube, e1, 1, budget, rng.child("mu-k1"))
    th = sphere_points(3, budget, rng.child("sphere-k1"))
    w = cube.vertices @ th.T
    direct = Linearized.mean((w.max(axis=0) - w.min(axis=0)) ** -3.0, "sphere") * (
        sphere_area(3) / 3)
    d = mu1 - direct
    _rec(rep, d, case="mu-k1/centered-cube", body="centered-cube3", lhs=mu1.value,
         rhs=direct.value, margin=d.value, kind=EQ, n=3, k=1, notes={"half_polar_volume": 1 / 6})
    _fubini_cases(rep)
    _wedge_cases(rep, rng.child("wedge"))
    _le_cases(rep, rng.child("le"))
    return rep


def fubini_configs():
    e = np.eye(3)
    q = np.linalg.qr(np.random.default_rng(3).standard_normal((3, 3)))[0]
    rp = standard_body("random-poly", 3, m=20, seed=2)
    return [
        ("cube/E=e1/x=e2", standard_body("cube", 3), e[:, :1], e[1], 256),
        ("simplex/E=e1/x=e2", standard_body("simplex", 3), e[:, :1], e[1], 512),
        ("simplex/E=e1/x=tilted", standard_body("simplex", 3), e[:, :1], (e[1] + e[2]) / 2 ** 0.5,
         512),
        ("rpoly/E=line/x=random", rp, q[:, :1], q[:, 1] + 0.5 * q[:, 2], 512),
        ("cube/E=plane/x=e3", standard_body("cube", 3), e[:, :2], e[2], 128),
        ("rpoly/E=plane/x=normal", rp, q[:, :2], 0.7 * q[:, 2], 128),
    ]


def _fubini_cases(rep):
    for label, b, F, x, grid in fubini_configs():
        lhs, rhs = fubini_check(b, Subspace(F), x, grid)
        rep.add(CaseRecord(f"fubini/{label}", label.split("/")[0], lhs, float(rhs), 0.0, EQ,
                           n=3, k=F.shape[1] + 1, floor=0.005 * abs(lhs), notes={"grid": grid}))


def _wedge_cases(rep, rng):
    cube = standard_body("cube", 3)
    rp = standard_body("random-poly", 3, m=20, seed=2)
    e = np.eye(3)
    R = haar_orthogonal(3, 1, rng.child("orth"))[0]
    fixed = [("identity", cube, np.eye(3), e[:2]), ("orthogonal", rp, R, e[:2] + 0.3 * e[2]),
             ("diagonal", cube, np.diag([2.0, 1.0, 1.0]), e[:2])]
    for label, b, T, xs in fixed:
        lhs, rhs = wedge_transform_check(b, T, xs)
        rep.add(CaseRecord(f"wedge/{label}", "cube" if b is cube else "rpoly", lhs, rhs, 0.0, EQ,
                           n=3, k=len(xs), floor=1e-9 * abs(lhs)))
    g = rng.child("random").generator()
    for i in range(20):
        T = g.standard_normal((3, 3))
        kk = 1 + i % 3
        lhs, rhs = wedge_transform_check(rp, T, g.standard_normal((kk, 3)))
        rep.add(CaseRecord(f"wedge/random-{i:02d}", "rpoly", lhs, rhs, 0.0, EQ, n=3, k=kk,
                           floor=1e-7 * abs(lhs)))


def _le_cases(rep, rng):
    """L_E(K) for E = {0} is (1/2) K°; convexity and symmetry of the gauge."""
    cube = standard_body("cube", 3, centered=True, side=2.0)
    pol = polar(cube)
    X = rng.child("probes").generator().uniform(-1.0, 1.0, (1000, 3))
    empty = Subspace.empty(3)
    g = np.array([le_gauge(cube, empty, x) for x in X])
    # x in (1/2) K° iff 2x in K°
    ref = np.max((2.0 * X) @ pol.normals.T - pol.offsets, axis=1) <= 0
    clear = np.abs(g - 1.0) > 1e-9
    mismatches = int(np.sum((g <= 1.0)[clear] != ref[clear]))
    rep.add(CaseRecord("le/half-polar/centered-cube", "centered-cube3", float(mismatches), 0.0,
                       0.0, EQ, n=3, k=1, notes={"probes": 1000}))
    for j in range(5):
        r = rng.child(f"cfg-{j}")
        b = standard_body("random-poly", 3, m=12 + 4 * j, seed=100 + j)
        E = Subspace(haar_orthogonal(3, 1, r.child("E"))[0][:, :1])
        P = np.eye(3) - E.projector
        pts = r.generator().standard_normal((2000, 3)) @ P
        gauges = np.array([le_gauge(b, E, x) for x in pts])
        pts = pts / gauges[:, None] * r.generator().random(2000)[:, None]
        a, c = pts[:1000], pts[1000:]
        mid = np.array([le_gauge(b, E, x) for x in 0.5 * (a + c)])
        ga = np.array([le_gauge(b, E, x) for x in a])
        gc = np.array([le_gauge(b, E, x) for x in c])
        viol = float(np.max(mid - 0.5 * (ga + gc)))
        rep.add(CaseRecord(f"le/convexity/cfg{j}", f"rpoly-{j}", 0.0, viol, 0.0, GEQ, n=3, k=2,
                           floor=1e-7, notes={"pairs": 1000}))
        sym = float(np.max(np.abs(ga - np.array([le_gauge(b, E, -x) for x in a]))))
        rep.add(CaseRecord(f"le/symmetry/cfg{j}", f"rpoly-{j}", sym, 0.0, 0.0, EQ, n=3, k=2,
                           floor=1e-10))


# ---------------------------------------------------------------- registry

SUITES = {
    "exact-geometry": (suite_exact_geometry, "closed-form volumes and cube shadows"),
    "kubota": (suite_kubota, "Kubota mean of shadows against the Steiner polynomial fit"),
    "lutwak": (suite_lutwak, "Phi_k(K) >= Phi_k(B_K), equality for ellipsoids"),
    "steiner": (suite_steiner, "Phi_k does not increase under Steiner symmetrization"),
    "af-chain": (suite_af_chain, "I_{k,p}^{1/k} >= I_{m,p}^{1/m} for m >= -p"),
    "lp-structure": (suite_lp_structure, "p-monotonicity, ellipsoid threshold, invariances"),
    "loomis-whitney": (suite_loomis_whitney, "classical and averaged Loomis-Whitney"),
    "petty": (suite_petty, "polar projection body grows under symmetrization"),
    "local-min": (suite_local_min, "perturbations of a near-ball"),
    "dichotomy": (suite_dichotomy, "shadow-system profiles t -> Phi_k(K_u(t))"),
    "slab": (suite_slab, "slab body volume and Phi_1 lower bound"),
    "bp": (suite_bp, "Blaschke-Petkantschin ratio independent of the test function"),
    "rolodex": (suite_rolodex, "rolodex measure, Fubini and wedge identities"),
}


def run_suite(name, seed, budget=200_000, catalog=None, **opts) -> SuiteReport:
    from ..errors import UnknownName

    if name not in SUITES:
        raise UnknownName(f"unknown suite {name!r}")
    catalog = catalog or BodyCatalog.load()
    rng = RngStream(seed, 0).child(f"suite:{name}")
    t0 = time.perf_counter()
    rep = SUITES[name][0](catalog, budget, rng, **opts)
    rep.seed = seed
    rep.wall_time = time.perf_counter() - t0
    return rep
