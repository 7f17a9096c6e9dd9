import numpy as np

from ..errors import RankDeficient

ORTHO_TOL = 1e-10


def as_vector(x, dim=None):
    v = np.asarray(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and v.shape[0] != dim:
        from ..errors import DimensionMismatch

        raise DimensionMismatch(f"expected dimension {dim}, got {v.shape[0]}")
    return v


def sign_fixed_qr(a):
    """QR factorization whose triangular factor has a positive diagonal.

    Works on a single matrix or a stack of shape (..., n, k).  The sign
    convention makes Q a deterministic function of the column span and is
    what makes QR of a Gaussian matrix Haar distributed.
    """
    q, r = np.linalg.qr(a)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1)).copy()
    d[d == 0] = 1.0
    return q * d[..., None, :], r * d[..., :, None]


def qr_orthonormalize(m):
    """Orthonormal basis of the column span of ``m``, sign-fixed.

    Raises RankDeficient when the columns are (numerically) dependent.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("expected a matrix")
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[-1] <= 1e-12 * s[0]:
        raise RankDeficient("columns are not linearly independent")
    q, _ = sign_fixed_qr(m)
    return q


def is_orthonormal(q, tol=ORTHO_TOL):
    q = np.asarray(q, dtype=float)
    g = q.T @ q
    return bool(np.max(np.abs(g - np.eye(q.shape[1]))) <= tol)


def orthonormal_complement(u):
    """Columns spanning the orthogonal complement of the unit vector ``u``."""
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    basis = np.column_stack([u, np.eye(n)])
    # pick the n-1 identity columns least aligned with u so the QR is well posed
    order = np.argsort(np.abs(u), kind="stable")[: n - 1]
    q, _ = sign_fixed_qr(np.column_stack([u, basis[:, 1:][:, order]]))
    comp = q[:, 1:]
    # project out u exactly once more to clean rounding
    comp = comp - np.outer(u, u @ comp)
    q2, _ = sign_fixed_qr(comp)
    return q2


def gram_det_sqrt(vectors):
    """k-volume of the parallelepiped spanned by the rows of ``vectors``."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    g = v @ v.T
    return float(np.sqrt(max(np.linalg.det(g), 0.0)))
