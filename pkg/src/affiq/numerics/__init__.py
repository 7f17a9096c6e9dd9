from .linalg import as_vector, is_orthonormal, orthonormal_complement, qr_orthonormalize, sign_fixed_qr
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPProblem, LPResult, feasible_point, lp_solve
from .rng import RngStream, map_chunks, rng_draw_gaussian, set_threads, threads
from .stats import Linearized, MCEstimate, kmean, ksum, power_mean

__all__ = [
    "as_vector", "is_orthonormal", "orthonormal_complement", "qr_orthonormalize",
    "sign_fixed_qr", "INFEASIBLE", "OPTIMAL", "UNBOUNDED", "LPProblem", "LPResult",
    "feasible_point", "lp_solve", "RngStream", "map_chunks", "rng_draw_gaussian",
    "set_threads", "threads", "Linearized", "MCEstimate", "kmean", "ksum", "power_mean",
]
