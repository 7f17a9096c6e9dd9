"""Suite reports: per-case records, pass rules and serialization."""

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

SIGMAS = 4.0
# relative allowance for floating-point rounding in exactly paired cases
ROUND_REL = 1e-9

# assertion kinds
GEQ = "geq"          # margin >= -(4 stderr + floor)
STRICT = "strict"    # margin > 4 stderr + floor
EQ = "eq"            # |margin| <= 4 stderr + floor
BAND = "band"        # -4 stderr <= margin <= floor + 4 stderr
INFO = "info"        # reported only

CSV_COLUMNS = ["suite", "case", "body", "n", "k", "p", "t", "u_hash", "lhs", "rhs",
               "margin", "stderr", "pass"]


def u_hash(u):
    if u is None:
        return ""
    v = np.round(np.asarray(u, dtype=float), 12) + 0.0
    return hashlib.blake2b(v.tobytes(), digest_size=4).hexdigest()


@dataclass
class CaseRecord:
    case: str
    body: str
    lhs: float
    rhs: float
    stderr: float
    kind: str = GEQ
    n: int | None = None
    k: int | None = None
    p: float | None = None
    t: float | None = None
    u: tuple | None = None
    floor: float = 0.0
    margin: float | None = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.stderr = float(self.stderr)
        if self.margin is None:
            self.margin = self.lhs - self.rhs
        self.margin = float(self.margin)
        if self.u is not None:
            self.u = tuple(float(x) for x in np.asarray(self.u).ravel())
        # every exact pairing leaves rounding-level residue
        self.floor = float(self.floor) + ROUND_REL * max(abs(self.lhs), abs(self.rhs), 1e-300)

    @property
    def allowance(self):
        return SIGMAS * self.stderr + self.floor

    @property
    def passed(self):
        m, s = self.margin, SIGMAS * self.stderr
        if not math.isfinite(m):
            return False
        if self.kind == GEQ:
            return m >= -self.allowance
        if self.kind == STRICT:
            return m > self.allowance
        if self.kind == EQ:
            return abs(m) <= self.allowance
        if self.kind == BAND:
            return -s - ROUND_REL * abs(self.lhs) <= m <= self.allowance
        return None

    def to_dict(self):
        return {
            "case": self.case, "body": self.body, "kind": self.kind, "n": self.n, "k": self.k,
            "p": self.p, "t": self.t, "u": list(self.u) if self.u is not None else None,
            "u_hash": u_hash(self.u), "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin,
            "stderr": self.stderr, "floor": self.floor, "pass": self.passed,
            "notes": self.notes,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    budget: int
    params: dict = field(default_factory=dict)
    cases: list = field(default_factory=list)
    # excluded from serialized output so reports are byte-stable
    wall_time: float = 0.0

    def add(self, rec: CaseRecord):
        self.cases.append(rec)
        return rec

    @property
    def asserted(self):
        return [c for c in self.cases if c.kind != INFO]

    @property
    def passed(self):
        return all(c.passed for c in self.asserted)

    @property
    def failures(self):
        return [c for c in self.asserted if not c.passed]

    def sorted_cases(self):
        return sorted(self.cases, key=lambda c: c.case)

    def to_dict(self):
        return {
            "suite": self.suite, "seed": self.seed, "budget": self.budget,
            "params": _plain(self.params), "pass": self.passed,
            "n_cases": len(self.cases), "n_asserted": len(self.asserted),
            "n_failed": len(self.failures),
            "cases": [_plain(c.to_dict()) for c in self.sorted_cases()],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=1, allow_nan=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for c in self.sorted_cases():
            d = c.to_dict()
            w.writerow([self.suite, c.case, c.body, _cell(c.n), _cell(c.k), _cell(c.p),
                        _cell(c.t), d["u_hash"], repr(c.lhs), repr(c.rhs), repr(c.margin),
                        repr(c.stderr), "" if c.passed is None else str(c.passed).lower()])
        return buf.getvalue()

    def summary(self):
        state = "PASS" if self.passed else "FAIL"
        return (f"{self.suite}: {state} ({len(self.asserted) - len(self.failures)}/"
                f"{len(self.asserted)} asserted cases, {len(self.cases)} total)")


def _cell(v):
    return "" if v is None else repr(v)


def _plain(obj):
    """Convert numpy scalars/arrays so that json emits repr-exact floats."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj
