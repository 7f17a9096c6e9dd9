"""Haar sampling on rotations, spheres and Grassmannians.

Batch samplers return stacked frames keyed by sample index (see
``numerics.rng``), so estimates are reproducible for any worker count.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadDims, DependentVector
from .numerics.linalg import as_vector, orthonormal_complement, sign_fixed_qr
from .numerics.rng import RngStream, map_chunks
from .numerics.stats import Linearized


@dataclass(frozen=True, eq=False)
class Subspace:
    frame: np.ndarray

    def __post_init__(self):
        f = np.array(self.frame, dtype=float)
        if f.ndim != 2:
            raise BadDims("frame must be an n x k matrix")
        if f.shape[1] and np.max(np.abs(f.T @ f - np.eye(f.shape[1]))) > 1e-10:
            raise BadDims("frame columns are not orthonormal")
        f.setflags(write=False)
        object.__setattr__(self, "frame", f)

    @classmethod
    def empty(cls, n):
        return cls(np.zeros((n, 0)))

    @property
    def n(self):
        return self.frame.shape[0]

    @property
    def k(self):
        return self.frame.shape[1]

    @property
    def projector(self):
        return self.frame @ self.frame.T

    def project(self, x):
        """Coordinates of x (or rows of x) in the frame basis."""
        return np.asarray(x, dtype=float) @ self.frame

    def complement_residual(self, x):
        x = np.asarray(x, dtype=float)
        return x - self.frame @ (self.frame.T @ x)


@dataclass(frozen=True, eq=False)
class SplitSample:
    E: Subspace
    theta: np.ndarray
    weight: float


def haar_orthogonal(n, n_samples, rng: RngStream):
    """(N, n, n) Haar-distributed orthogonal matrices (sign-fixed QR)."""
    if n < 1:
        raise BadDims("n must be positive")

    def chunk(c, a, b):
        g = rng.generator(c).standard_normal((b - a, n, n))
        return sign_fixed_qr(g)[0]

    return map_chunks(chunk, n_samples)


def haar_frames(n, k, n_samples, rng: RngStream):
    """(N, n, k) orthonormal frames of Haar-random k-subspaces.

    The first k columns of a Haar orthogonal matrix; the same stream thus
    yields nested frames for every k, which lets estimates at different k
    share samples.
    """
    if not 1 <= k <= n:
        raise BadDims("need 1 <= k <= n")
    return haar_orthogonal(n, n_samples, rng)[:, :, :k]


def sample_grassmannian(n, k, rng: RngStream) -> Subspace:
    if not 1 <= k <= n:
        raise BadDims("need 1 <= k <= n")
    g = rng.generator().standard_normal((n, k))
    return Subspace(sign_fixed_qr(g)[0])


def sample_rotation(n, rng: RngStream):
    """Haar rotation in SO(n)."""
    if n < 2:
        raise BadDims("n must be at least 2")
    q = sign_fixed_qr(rng.generator().standard_normal((n, n)))[0]
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def sphere_points(n, n_samples, rng: RngStream):
    """(N, n) uniform points on S^{n-1}."""
    def chunk(c, a, b):
        g = rng.generator(c).standard_normal((b - a, n))
        return g / np.linalg.norm(g, axis=1)[:, None]

    return map_chunks(chunk, n_samples)


def split_frames(u, k, n_samples, rng: RngStream):
    """Batch version of :func:`sample_split`.

    Returns ``(E, theta, weight)`` with E of shape (N, n, k-1), theta (N, n)
    and weight (N,).  E is Haar in G(u^perp, k-1), theta uniform on the unit
    sphere of E^perp, weight = |<theta, u>|^(k-1).
    """
    u = as_vector(u)
    n = u.size
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise BadDims("u must be a unit vector")
    if not 1 <= k <= n:
        raise BadDims("need 1 <= k <= n")
    B = orthonormal_complement(u)

    def chunk(c, a, b):
        gen = rng.generator(c)
        m = b - a
        if n > 1:
            W = sign_fixed_qr(gen.standard_normal((m, n - 1, n - 1)))[0]
        else:
            W = np.zeros((m, 0, 0))
        g = gen.standard_normal((m, n - k + 1))
        g /= np.linalg.norm(g, axis=1)[:, None]
        E = B @ W[:, :, : k - 1]
        rest = B @ W[:, :, k - 1:]
        theta = g[:, :1] * u + np.einsum("mij,mj->mi", rest, g[:, 1:])
        weight = np.abs(g[:, 0]) ** (k - 1)
        return E, theta, weight

    return map_chunks(chunk, n_samples)


def sample_split(u, n, k, rng: RngStream) -> SplitSample:
    u = as_vector(u, n)
    if not 1 <= k <= n - 1:
        raise BadDims("need 1 <= k <= n - 1")
    E, theta, w = split_frames(u, k, 1, rng)
    return SplitSample(Subspace(E[0]), theta[0], float(w[0]))


def span_of(E: Subspace, x) -> Subspace:
    x = as_vector(x, E.n)
    r = E.complement_residual(x)
    nr = np.linalg.norm(r)
    if nr <= 1e-10 * np.linalg.norm(x) or nr == 0:
        raise DependentVector("x lies in span(E)")
    r = r / nr
    # one re-orthogonalization pass keeps the frame orthonormal to ~1e-16
    r = E.complement_residual(r)
    r /= np.linalg.norm(r)
    return Subspace(np.column_stack([E.frame, r]))


def bp_samples(fs, u, k, n_samples, rng: RngStream):
    """Shared-sample evaluation of test functions on both sides of the
    Blaschke-Petkantschin change of variables.

    ``fs`` is a list of vectorized callables mapping frames (N, n, k) to
    positive values.  Returns ``(haar_values, split_values, weights)`` with one
    row per function.
    """
    u = as_vector(u)
    n = u.size
    frames = haar_frames(n, k, n_samples, rng.child("haar"))
    E, theta, w = split_frames(u, k, n_samples, rng.child("split"))
    split = np.concatenate([E, theta[:, :, None]], axis=2)
    lhs = np.array([f(frames) for f in fs])
    rhs = np.array([f(split) for f in fs])
    return lhs, rhs, w


def bp_ratio(lhs_vals, rhs_vals, weights):
    """Linearized estimate of mean(f w)_split / mean(f)_haar."""
    top = Linearized.mean(rhs_vals * weights, "split")
    bottom = Linearized.mean(lhs_vals, "haar")
    return top / bottom


def bp_ratio_check(f, u, n, k, n_samples, rng: RngStream):
    """(lhs, rhs) Monte Carlo estimates; rhs/lhs estimates the BP constant
    with the sphere measure normalized to probability.
    """
    u = as_vector(u, n)
    if not 1 <= k <= n:
        raise BadDims("need 1 <= k <= n")
    lhs, rhs, w = bp_samples([f], u, k, n_samples, rng)
    a = Linearized.mean(lhs[0], "haar").estimate(rng.seed)
    b = Linearized.mean(rhs[0] * w, "split").estimate(rng.seed)
    return a, b
