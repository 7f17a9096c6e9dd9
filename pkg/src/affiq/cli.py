"""Command-line entry point.

Exit codes: 0 success, 1 a verification suite failed, 2 usage error,
3 numerical failure (degenerate geometry and the like).
"""

import argparse
import inspect
import json
import sys

import numpy as np

from . import bodies as B
from .errors import GeometryError, UnknownName
from .experiments import SUITES, BodyCatalog, run_suite
from .hull import body_volume
from .numerics.rng import RngStream, set_threads
from .quermass import QuermassSpec, ball_quermass, i_kp, q_kp

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {"budget": 200_000}


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text):
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise UsageError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _p_value(text):
    if str(text).lower() in ("log", "0"):
        return 0.0
    try:
        return float(text)
    except ValueError as exc:
        raise UsageError(f"p must be a number or 'log', got {text!r}") from exc


def _dump(obj, args):
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_seed(args):
    if args.seed is None:
        raise UsageError("--seed is required for stochastic commands")


def _load_body(args, catalog=None):
    if getattr(args, "body", None):
        name = args.body[0] if isinstance(args.body, list) else args.body
        catalog = catalog or BodyCatalog.load(args.catalog)
        if name in catalog:
            return name, catalog.get(name)
        return name, _read_body(name, f"{name!r} is neither a catalog id nor a body file")
    if getattr(args, "file", None):
        return args.file, _read_body(args.file, f"cannot read body file {args.file!r}")
    raise UsageError("a body is required (--body FILE or catalog id)")


def _read_body(path, missing):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(missing) from exc
    try:
        return B.loads(text)
    except (json.JSONDecodeError, UnknownName) as exc:
        raise UsageError(f"malformed body file {path!r}: {exc}") from exc
    except KeyError as exc:
        raise UsageError(f"malformed body file {path!r}: missing {exc}") from exc


# ------------------------------------------------------------------ body

def cmd_body(args):
    if args.action == "generate":
        if not args.kind or not args.n:
            raise UsageError("body generate needs --kind and --n")
        params = {}
        if args.m is not None:
            params["m"] = args.m
        if args.gen_seed is not None:
            params["seed"] = args.gen_seed
        if args.side is not None:
            params["side"] = args.side
        if args.sides:
            params["sides"] = _floats(args.sides)
        if args.axes:
            params["axes"] = _floats(args.axes)
        if args.radius is not None:
            params["radius"] = args.radius
        if args.centered:
            params["centered"] = True
        try:
            b = B.standard_body(args.kind, args.n, **params)
        except (UnknownName, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        _dump(B.body_to_dict(b), args)
        return EXIT_OK
    name, b = _load_body(args)
    vol = body_volume(b, rng=RngStream(0, 0))
    center, radius = b.inball
    info = {"dim": b.dim, "representation": B.body_to_dict(b)["kind"],
            "volume": vol.value, "volume_method": vol.method, "volume_stderr": vol.stderr,
            "inradius": radius, "incenter": list(map(float, center))}
    if isinstance(b, B.VPolytope):
        info["vertices"] = int(len(b.hull.vertices))
    elif isinstance(b, B.HPolytope):
        info["rows"] = int(len(b.offsets))
    _dump(info, args)
    return EXIT_OK


# -------------------------------------------------------------- quermass

def cmd_quermass(args):
    _require_seed(args)
    name, b = _load_body(args)
    n = b.dim
    if args.k is None or not 1 <= args.k <= n:
        raise UsageError(f"--k must lie in 1..{n}")
    p = _p_value(args.p if args.p is not None else -n)
    rng = RngStream(args.seed, 0)
    q = q_kp(QuermassSpec(b, args.k, p, args.budget), rng.child("quermass"))
    i = i_kp(b, args.k, p, args.budget, rng.child("quermass"))
    vol = body_volume(b, rng=rng.child("volume")).value
    out = {"body": name, "n": n, "k": args.k, "p": p, "budget": args.budget, "seed": args.seed,
           "Q": q.to_dict(), "I": i.to_dict(), "ball_value": ball_quermass(n, args.k, vol)}
    if p == -n:
        out["Phi"] = q.to_dict()
    _dump(out, args)
    return EXIT_OK


# ------------------------------------------------------------ symmetrize

def cmd_symmetrize(args):
    from .symmetry import default_extra, shadow_body

    _require_seed(args)
    name, b = _load_body(args)
    if not isinstance(b, B.VPolytope):
        raise UsageError("symmetrize needs a V-polytope body")
    if not args.u:
        raise UsageError("--u is required")
    u = np.asarray(_floats(args.u))
    if u.size != b.dim or not np.any(u):
        raise UsageError("--u must be a nonzero vector of the body's dimension")
    u = u / np.linalg.norm(u)
    t = float(args.t if args.t is not None else 0.0)
    extra = args.n_extra if args.n_extra is not None else default_extra(b.dim)
    sb = shadow_body(b, u, t, extra, RngStream(args.seed, 0).child("symmetrize"))
    _dump(B.body_to_dict(sb.body), args)
    return EXIT_OK


# ---------------------------------------------------------------- verify

def _suite_options(name, args):
    fn = SUITES[name][0]
    accepted = set(inspect.signature(fn).parameters)
    opts = {}
    if args.n:
        opts["n_values"] = _ints(args.n)
    if args.k:
        opts["ks"] = tuple(_ints(args.k))
    if args.p:
        opts["p_grid"] = [_p_value(x) for x in str(args.p).split(",")]
    if args.t:
        opts["t_grid"] = tuple(_floats(args.t))
    if args.body:
        opts["bodies"] = list(args.body)
    if args.dirs is not None:
        opts["dirs"] = args.dirs
    if args.n_extra is not None:
        opts["n_extra"] = args.n_extra
    if getattr(args, "explore", False):
        opts["explore"] = True
    if args.n and args.k and "nk" in accepted:
        opts["nk"] = tuple((n, k) for n in _ints(args.n) for k in _ints(args.k) if 1 <= k < n)
    return {k: v for k, v in opts.items() if k in accepted}


def _emit_report(rep, args):
    fmt = args.format or ("both" if args.out else "json")
    if args.out:
        if fmt in ("json", "both"):
            path = args.out if fmt == "json" else _with_suffix(args.out, ".json")
            with open(path, "w") as fh:
                fh.write(rep.to_json())
        if fmt in ("csv", "both"):
            path = args.out if fmt == "csv" else _with_suffix(args.out, ".csv")
            with open(path, "w") as fh:
                fh.write(rep.to_csv())
    else:
        sys.stdout.write(rep.to_csv() if fmt == "csv" else rep.to_json())
    sys.stderr.write(rep.summary() + f" in {rep.wall_time:.1f}s\n")


def _with_suffix(path, suffix):
    for s in (".json", ".csv"):
        if path.endswith(s):
            return path[: -len(s)] + suffix
    return path + suffix


def _run(name, args):
    _require_seed(args)
    catalog = BodyCatalog.load(args.catalog)
    if args.body:
        for b in args.body:
            if b not in catalog:
                raise UsageError(f"unknown catalog body {b!r}")
    rep = run_suite(name, args.seed, args.budget, catalog, **_suite_options(name, args))
    _emit_report(rep, args)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args):
    if args.list:
        for name, (_, desc) in SUITES.items():
            sys.stdout.write(f"{name:16s} {desc}\n")
        return EXIT_OK
    if not args.suite:
        raise UsageError("verify needs a suite name (see --list)")
    return _run(args.suite, args)


def cmd_bp(args):
    return _run("bp", args)


def cmd_rolodex(args):
    return _run("rolodex", args)


# ---------------------------------------------------------------- parser

def _common(p, stochastic=True):
    p.add_argument("--budget", type=int, help="Monte Carlo samples per estimate")
    if stochastic:
        p.add_argument("--seed", type=int, help="root seed (required)")
    p.add_argument("--threads", type=int, help="worker threads (default: AFFIQ_THREADS or 1)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["json", "csv", "both"])
    p.add_argument("--catalog", help="catalog JSON (default: bundled)")
    p.add_argument("--config", help="JSON file with option defaults")


def _suite_flags(p):
    p.add_argument("--n", help="dimension(s), comma separated")
    p.add_argument("--k", help="projection dimension(s), comma separated")
    p.add_argument("--p", help="moment exponent(s); 'log' for p = 0")
    p.add_argument("--t", help="shadow-system times, comma separated")
    p.add_argument("--u", help="direction, comma separated")
    p.add_argument("--body", action="append", help="catalog body id (repeatable)")
    p.add_argument("--dirs", type=int, help="random directions per body")
    p.add_argument("--n-extra", type=int, dest="n_extra", help="extra base points for symmetrals")


def build_parser():
    ap = argparse.ArgumentParser(prog="affiq", description="L^p-moment quermassintegral toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("body", help="generate or inspect a body")
    pb.add_argument("action", choices=["generate", "inspect"])
    pb.add_argument("file", nargs="?", help="body JSON (inspect)")
    pb.add_argument("--kind")
    pb.add_argument("--n", type=int)
    pb.add_argument("--m", type=int)
    pb.add_argument("--seed", type=int, dest="gen_seed", help="generator seed for random bodies")
    pb.add_argument("--side", type=float)
    pb.add_argument("--sides")
    pb.add_argument("--axes")
    pb.add_argument("--radius", type=float)
    pb.add_argument("--centered", action="store_true")
    pb.add_argument("--body", help="catalog id or body file (inspect)")
    pb.add_argument("--out")
    pb.add_argument("--catalog")
    pb.add_argument("--config")
    pb.add_argument("--threads", type=int)
    pb.set_defaults(func=cmd_body)

    pq = sub.add_parser("quermass", help="estimate Q_{k,p}, Phi_k and I_{k,p}")
    pq.add_argument("action", choices=["compute"])
    pq.add_argument("file", nargs="?", help="body JSON")
    pq.add_argument("--body", help="catalog id or body file")
    pq.add_argument("--k", type=int)
    pq.add_argument("--p", help="exponent (default -n); 'log' for p = 0")
    _common(pq)
    pq.set_defaults(func=cmd_quermass)

    ps = sub.add_parser("symmetrize", help="Steiner symmetral or shadow body K_u(t)")
    ps.add_argument("file", nargs="?", help="body JSON")
    ps.add_argument("--body", help="catalog id or body file")
    ps.add_argument("--u")
    ps.add_argument("--t", type=float)
    ps.add_argument("--n-extra", type=int, dest="n_extra")
    _common(ps)
    ps.set_defaults(func=cmd_symmetrize)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", nargs="?", choices=sorted(SUITES))
    pv.add_argument("--list", action="store_true", help="list suites")
    pv.add_argument("--explore", action="store_true", help="report unproven AF-chain ranges")
    _suite_flags(pv)
    _common(pv)
    pv.set_defaults(func=cmd_verify)

    for name, fn, helptext in (("bp-check", cmd_bp, "Blaschke-Petkantschin ratio check"),
                               ("rolodex-check", cmd_rolodex, "rolodex measure and identities")):
        p = sub.add_parser(name, help=helptext)
        _suite_flags(p)
        _common(p)
        p.set_defaults(func=fn)
    return ap


def _apply_config(args):
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        for key, val in cfg.items():
            key = key.replace("-", "_")
            if hasattr(args, key) and getattr(args, key) in (None, False):
                setattr(args, key, val)
    for key, val in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, val)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _apply_config(args)
        if getattr(args, "threads", None):
            set_threads(args.threads)
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"affiq: error: {exc}\n")
        return EXIT_USAGE
    except GeometryError as exc:
        sys.stderr.write(f"affiq: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        sys.stderr.write(f"affiq: numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
