"""Small dense linear programs solved by the two-phase simplex method.

Pivoting follows Bland's rule (smallest eligible entering index, ties in the
ratio test broken by the smallest basic variable index), so the solver is
deterministic and cannot cycle.  Instances here are tiny: vertex-weight
programs for membership and fiber extremes of desk-scale polytopes.
"""

from dataclasses import dataclass, field

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_COST_EPS = 1e-10
_PIVOT_EPS = 1e-10
_FEAS_EPS = 1e-9
_MAX_PIVOTS = 50_000


@dataclass(frozen=True)
class LPProblem:
    """maximize c.x  subject to  A_eq x = b_eq,  A_ub x <= b_ub.

    Variables are nonnegative unless listed in ``free``.
    """

    c: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    free: tuple = field(default_factory=tuple)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        object.__setattr__(self, "c", c)
        nv = c.shape[0]
        for a_name, b_name in (("A_eq", "b_eq"), ("A_ub", "b_ub")):
            a, b = getattr(self, a_name), getattr(self, b_name)
            if a is None:
                a = np.zeros((0, nv))
                b = np.zeros(0)
            a = np.atleast_2d(np.asarray(a, dtype=float))
            b = np.asarray(b, dtype=float).reshape(-1)
            if a.shape[0] == 0:
                a = a.reshape(0, nv)
            if a.shape[1] != nv:
                raise ValueError(f"{a_name} has {a.shape[1]} columns, expected {nv}")
            if a.shape[0] != b.shape[0]:
                raise ValueError(f"{a_name} and {b_name} row counts differ")
            object.__setattr__(self, a_name, a)
            object.__setattr__(self, b_name, b)
        object.__setattr__(self, "free", tuple(sorted(set(int(i) for i in self.free))))

    @property
    def n_vars(self):
        return self.c.shape[0]


@dataclass(frozen=True)
class LPResult:
    status: str
    value: float = float("nan")
    x: np.ndarray | None = None

    @property
    def optimal(self):
        return self.status == OPTIMAL


def _pivot(T, r, j):
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run(T, basis, costs, allowed):
    """Maximize costs.x over the canonical tableau T (last column = rhs)."""
    for _ in range(_MAX_PIVOTS):
        red = costs - costs[basis] @ T[:, :-1]
        cand = np.nonzero(allowed & (red > _COST_EPS))[0]
        if cand.size == 0:
            return OPTIMAL
        j = int(cand[0])
        col = T[:, j]
        rows = np.nonzero(col > _PIVOT_EPS)[0]
        if rows.size == 0:
            return UNBOUNDED
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(ties[np.argmin(np.asarray(basis)[ties])])
        _pivot(T, r, j)
        basis[r] = j
    raise RuntimeError("simplex pivot limit reached")


def lp_solve(p: LPProblem) -> LPResult:
    """Solve ``p``; infeasible and unbounded are returned as statuses."""
    nv = p.n_vars
    free = list(p.free)
    # split free variables x = x+ - x-; inequality rows get slacks
    A_eq = np.hstack([p.A_eq, -p.A_eq[:, free]]) if free else p.A_eq
    A_ub = np.hstack([p.A_ub, -p.A_ub[:, free]]) if free else p.A_ub
    c = np.concatenate([p.c, -p.c[free]]) if free else p.c.copy()
    ns = A_ub.shape[0]
    nstruct = c.shape[0]
    A = np.vstack([
        np.hstack([A_eq, np.zeros((A_eq.shape[0], ns))]),
        np.hstack([A_ub, np.eye(ns)]),
    ])
    b = np.concatenate([p.b_eq, p.b_ub])
    costs = np.concatenate([c, np.zeros(ns)])
    m, nx = A.shape

    if m == 0:
        if np.any(costs > _COST_EPS):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, 0.0, np.zeros(nv))

    neg = b < 0
    A[neg] *= -1.0
    b = np.where(neg, -b, b)

    # phase 1 with one artificial per row
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(nx, nx + m))
    c1 = np.concatenate([np.zeros(nx), -np.ones(m)])
    allowed = np.ones(nx + m, dtype=bool)
    _run(T, basis, c1, allowed)
    infeas = float(np.sum(T[:, -1][np.asarray(basis) >= nx]))
    if infeas > _FEAS_EPS * max(1.0, float(np.abs(b).max())):
        return LPResult(INFEASIBLE)

    # drive artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= nx:
            cols = np.nonzero(np.abs(T[r, :nx]) > 1e-9)[0]
            if cols.size:
                _pivot(T, r, int(cols[0]))
                basis[r] = int(cols[0])
                keep.append(r)
        else:
            keep.append(r)
    T = np.hstack([T[keep, :nx], T[keep, -1:]])
    basis = [basis[r] for r in keep]

    status = _run(T, basis, costs, np.ones(nx, dtype=bool))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    z = np.zeros(nx)
    z[basis] = T[:, -1]
    x = z[:nv].copy()
    if free:
        x[free] -= z[nv:nstruct]
    return LPResult(OPTIMAL, float(p.c @ x), x)


def feasible_point(A_eq, b_eq, free=()):
    """A point of {A_eq x = b_eq, x >= 0 (except free)}, or None."""
    A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
    res = lp_solve(LPProblem(np.zeros(A_eq.shape[1]), A_eq, b_eq, free=free))
    return res.x if res.optimal else None
