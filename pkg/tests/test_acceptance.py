"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N:
...`` line (visible under ``pytest -v``) before asserting.  Monte Carlo
suites run at seed 1 with the default budget of 2e5 samples per estimate.
"""

import math
import subprocess
import sys

import numpy as np

from affiq.bodies import standard_body
from affiq.experiments import run_suite
from affiq.experiments.report import EQ, GEQ, INFO, SIGMAS, STRICT
from affiq.grassmann import sphere_points
from affiq.hull import ball_volume, volume_exact
from affiq.numerics.rng import RngStream, threads
from affiq.quermass import hyperplane_shadows

SEED = 1
BUDGET = 200_000

_cache = {}


def suite(name, **opts):
    key = (name, tuple(sorted(opts.items())))
    if key not in _cache:
        _cache[key] = run_suite(name, SEED, BUDGET, **opts)
    return _cache[key]


def verdict(pytestconfig, number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print(f"\n{line}")
    assert ok, line


def failures(rep):
    return [c.case for c in rep.failures]


def cases(rep, prefix):
    return [c for c in rep.cases if c.case.startswith(prefix)]


def test_criterion_01_exact_geometry(pytestconfig):
    errs = []
    for n in (3, 4):
        for kind, exact in (("cube", 1.0), ("simplex", 1 / math.factorial(n)),
                            ("cross-polytope", 2.0 ** n / math.factorial(n))):
            errs.append(abs(volume_exact(standard_body(kind, n).hull).value - exact))
    shadow = 0.0
    for n in (3, 4):
        th = sphere_points(n, 100, RngStream(SEED).child(f"criterion-1-{n}"))
        got = hyperplane_shadows(standard_body("cube", n), th)
        shadow = max(shadow, float(np.max(np.abs(got - np.abs(th).sum(axis=1)))))
    rep = suite("exact-geometry")
    ok = max(errs) <= 1e-12 and shadow <= 1e-9 and rep.passed
    verdict(pytestconfig, 1, ok, f"max volume error {max(errs):.1e} (tol 1e-12), "
            f"max cube-shadow error {shadow:.1e} (tol 1e-9), suite {rep.summary()}")


def test_criterion_02_kubota_steiner(pytestconfig):
    rep = suite("kubota")
    by = {c.case: c for c in rep.cases}
    w2 = by["kubota/W2"]
    checks = {
        "Q(k=2,p=1)": (abs(w2.lhs - 2.0) / 2.0, 0.01),
        "fit W2": (abs(by["steiner-fit/W2"].lhs - 2.0) / 2.0, 0.05),
        "fit W3": (abs(by["steiner-fit/W3"].lhs - 1.0), 0.03),
        "fit W0": (abs(by["steiner-fit/W0"].lhs - ball_volume(3)) / ball_volume(3), 0.03),
    }
    ok = all(err <= tol for err, tol in checks.values())
    detail = ", ".join(f"{k} rel err {e:.2%} (tol {t:.0%})" for k, (e, t) in checks.items())
    verdict(pytestconfig, 2, ok, detail)


def test_criterion_03_lutwak(pytestconfig):
    rep = suite("lutwak")
    strict = [c for c in rep.cases if c.kind == STRICT]
    eq = [c for c in rep.cases if c.kind == EQ]
    s_ok = all(c.margin > SIGMAS * c.stderr for c in strict)
    e_ok = all(abs(c.margin) <= SIGMAS * c.stderr + c.floor for c in eq)
    eq_bodies = {c.body for c in eq}
    need = {"ellipsoid3a", "ellipsoid3b"}
    # n = 3 has k in {1, 2} and n = 4 has k in {1, 2, 3} for 6 bodies each
    ok = s_ok and e_ok and need <= eq_bodies and len(strict) == 6 * 2 + 6 * 3
    zmin = min(c.margin / c.stderr for c in strict)
    zeq = max(abs(c.margin) / c.stderr for c in eq)
    verdict(pytestconfig, 3, ok, f"{len(strict)} strict cases with min z = {zmin:.1f} (> 4), "
            f"{len(eq)} ellipsoid cases with max |z| = {zeq:.2f} (<= 4)")


def test_criterion_04_steiner(pytestconfig):
    rep = suite("steiner")
    sym = cases(rep, "symmetral/")
    prof = [c for c in cases(rep, "profile/") if c.kind != INFO]
    dirs = {}
    for c in sym:
        body, u = c.case.split("/")[1:3]
        dirs.setdefault(body, set()).add(u)
    ok = (rep.passed and all(len(v) >= 8 for v in dirs.values())
          and {c.k for c in sym} == {1, 2} and len(prof) > 0)
    zmin = min(c.margin / max(c.stderr, 1e-300) for c in sym)
    verdict(pytestconfig, 4, ok, f"{len(sym)} symmetral margins over {len(dirs)} bodies "
            f"(min z = {zmin:.1f}), {len(prof)} profile steps, failures {failures(rep)}")


def test_criterion_05_rolodex_mu(pytestconfig):
    rep = suite("rolodex")
    mu = [c for c in cases(rep, "mu/") if c.kind != INFO]
    combos = {c.case.split("/")[1] for c in mu}
    ok = all(c.passed for c in mu) and combos == {"n3k2", "n4k2", "n4k3"}
    z = max(abs(c.margin) / c.stderr for c in mu)
    verdict(pytestconfig, 5, ok, f"{len(mu)} ratio comparisons against the ball over {sorted(combos)}, "
            f"max |z| = {z:.2f}")


def test_criterion_06_bp(pytestconfig):
    rep = suite("bp")
    eq = [c for c in rep.cases if c.kind == EQ]
    combos = {c.case.split("/")[0] for c in eq}
    ok = rep.passed and combos == {"n3k2", "n4k2", "n4k3"} and len(eq) == 3 * 4
    z = max(abs(c.margin) / c.stderr for c in eq)
    verdict(pytestconfig, 6, ok, f"5 test functions per (n,k) in {sorted(combos)}, "
            f"max |z| of ratio differences = {z:.2f}")


def test_criterion_07_fubini_wedge(pytestconfig):
    rep = suite("rolodex")
    fub = cases(rep, "fubini/")
    fixed = [c for c in cases(rep, "wedge/") if "random" not in c.case]
    rand = cases(rep, "wedge/random-")
    f_err = max(abs(c.lhs - c.rhs) / abs(c.lhs) for c in fub)
    w_fixed = max(abs(c.lhs - c.rhs) for c in fixed)
    w_rand = max(abs(c.lhs - c.rhs) / max(1.0, abs(c.lhs)) for c in rand)
    ok = len(fub) == 6 and f_err <= 5e-3 and w_fixed <= 1e-9 and len(rand) == 20 and w_rand <= 1e-7
    verdict(pytestconfig, 7, ok, f"fubini max rel err {f_err:.1e} on {len(fub)} configs (tol 5e-3), "
            f"wedge fixed maps {w_fixed:.1e} (tol 1e-9), 20 random maps {w_rand:.1e} (tol 1e-7)")


def test_criterion_08_lp_structure(pytestconfig):
    lp = suite("lp-structure")
    af = suite("af-chain")
    mono = cases(lp, "p-monotone/")
    viol = sum(1 for c in mono if c.margin < -SIGMAS * c.stderr - c.floor)
    thr = cases(lp, "threshold/")
    thr_ok = all(c.margin > SIGMAS * c.stderr for c in thr) and len(thr) > 0
    chain = [c for c in af.cases if c.kind != INFO]
    ps = {c.p for c in chain}
    ok = viol == 0 and thr_ok and lp.passed and af.passed and {0.0, -1.0, -2.0} <= ps
    verdict(pytestconfig, 8, ok, f"{viol} p-monotonicity violations in {len(mono)} pairs, "
            f"threshold min z = {min(c.margin / c.stderr for c in thr):.1f}, "
            f"{len(chain)} AF-chain margins with p in {sorted(ps)} ({len(af.failures)} failures)")


def test_criterion_09_loomis_whitney(pytestconfig):
    rep = suite("loomis-whitney")
    classical = [c for c in cases(rep, "classical/") if c.kind == EQ]
    c_err = max(abs(c.lhs - c.rhs) / abs(c.rhs) for c in classical)
    strict = [c for c in cases(rep, "averaged/") if c.kind == STRICT]
    band = [c for c in cases(rep, "averaged/") if c.kind not in (STRICT, GEQ)]
    chain = cases(rep, "chain/")
    ok = (rep.passed and c_err <= 1e-9 and len(classical) > 0 and len(strict) > 0
          and all(c.margin > SIGMAS * c.stderr for c in strict) and len(band) > 0
          and all(c.passed for c in chain))
    verdict(pytestconfig, 9, ok, f"classical box equality rel err {c_err:.1e} (tol 1e-9), "
            f"averaged cube z = {strict[0].margin / strict[0].stderr:.1f}, "
            f"{len(band)} band case(s), {len(chain)} chain cases, failures {failures(rep)}")


def test_criterion_10_petty(pytestconfig):
    rep = suite("petty")
    cal = cases(rep, "calibration/")[0]
    target = (4 * math.pi / 3) / math.pi**3
    glob = cases(rep, "global/")
    chords = cases(rep, "chords/")
    ok = (abs(cal.rhs - target) <= 1e-15 and cal.passed and rep.passed
          and {c.body for c in glob} == {"simplex3", "cube3", "rpoly3a"}
          and len(glob) == 12 and len(chords) == 12)
    verdict(pytestconfig, 10, ok, f"|Pi* B| = {cal.lhs:.6g} vs {target:.6g}, "
            f"{len(glob)} global and {len(chords)} chord-wise comparisons, failures {failures(rep)}")


def test_criterion_11_determinism(pytestconfig, tmp_path):
    same = []
    for name, opts in (("lutwak", {"n_values": (3,)}), ("steiner", {"bodies": ["simplex3"]}),
                       ("petty", {"bodies": ["cube3"]}), ("bp", {})):
        runs = []
        for t in (1, 4):
            with threads(t):
                runs.append(run_suite(name, SEED, 50_000, **opts).to_json())
        same.append(runs[0] == runs[1])
    cli = []
    for t in ("1", "3"):
        path = tmp_path / f"rolodex-{t}.json"
        subprocess.run([sys.executable, "-m", "affiq.cli", "verify", "rolodex", "--seed", "1",
                        "--budget", "20000", "--threads", t, "--out", str(path), "--format",
                        "json"], check=True, capture_output=True)
        cli.append(path.read_bytes())
    ok = all(same) and cli[0] == cli[1]
    verdict(pytestconfig, 11, ok, f"in-process JSON identical across thread counts for "
            f"{sum(same)}/{len(same)} suites, CLI --threads 1 vs 3 byte-identical: {cli[0] == cli[1]}")
