"""Tolerant dense real linear algebra: the substrate for every other module.

All rank decisions in this package reduce to a singular-value zero test, so
the cutoff policy lives here and is threaded explicitly through every
operation.  Matrices are plain float64 ndarrays treated as immutable values:
operations never modify their arguments and always return fresh arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteError, ShapeMismatchError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "VectorSpace",
    "as_matrix",
    "as_vector",
    "rank_of",
    "nullspace_of",
    "solve_least_squares",
    "orthonormal_rows",
]


@dataclass(frozen=True)
class Tolerance:
    """Zero-test policy: a singular value s is zero iff s <= max(abs_eps, rel_eps * s_max)."""

    rel_eps: float = 1e-9
    abs_eps: float = 1e-12

    def __post_init__(self):
        if not self.rel_eps > 0:
            raise ValueError("rel_eps must be positive")
        if self.abs_eps < 0:
            raise ValueError("abs_eps must be nonnegative")

    def cutoff(self, scale: float) -> float:
        """Absolute cutoff for quantities whose natural scale is ``scale``."""
        return max(self.abs_eps, self.rel_eps * float(scale))


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class VectorSpace:
    """The ambient space R^dim."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")


def as_matrix(m, square: bool = False) -> np.ndarray:
    """Coerce to a finite float64 2-d array (copying), validating shape."""
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeMismatchError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("matrix contains NaN or Inf entries")
    if square and a.shape[0] != a.shape[1]:
        raise ShapeMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_vector(v) -> np.ndarray:
    """Coerce to a finite float64 1-d array (copying)."""
    a = np.array(v, dtype=float).reshape(-1)
    if a.size < 1:
        raise ShapeMismatchError("expected a nonempty vector")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("vector contains NaN or Inf entries")
    return a


def rank_of(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above the tolerance cutoff."""
    a = as_matrix(m)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.cutoff(s[0])))


def nullspace_of(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical kernel, as the columns of an (n, k) array.

    k equals ``cols - rank_of(m)``; an empty (n, 0) array means trivial kernel.
    """
    a = as_matrix(m)
    _, s, vt = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol.cutoff(s[0])))
    return vt[rank:].T.copy()


def solve_least_squares(a, b, tol: Tolerance = DEFAULT_TOL):
    """Minimum-norm least-squares solution of ``a x = b``.

    Returns ``(x, residual)`` with ``residual = ||a x - b||`` (Frobenius norm
    when b has several columns).  Singular values below the tolerance cutoff
    are discarded, which is what makes the solution the minimum-norm one.
    """
    am = as_matrix(a)
    barr = np.array(b, dtype=float)
    if not np.all(np.isfinite(barr)):
        raise NonFiniteError("right-hand side contains NaN or Inf entries")
    vector_rhs = barr.ndim == 1
    bm = barr.reshape(-1, 1) if vector_rhs else barr
    if bm.shape[0] != am.shape[0]:
        raise ShapeMismatchError(
            f"row counts disagree: {am.shape[0]} vs {bm.shape[0]}"
        )
    u, s, vt = np.linalg.svd(am, full_matrices=False)
    if s.size and s[0] > 0.0:
        keep = s > tol.cutoff(s[0])
    else:
        keep = np.zeros_like(s, dtype=bool)
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    x = vt.T @ (inv_s[:, None] * (u.T @ bm))
    residual = float(np.linalg.norm(am @ x - bm))
    if vector_rhs:
        x = x[:, 0]
    return x, residual


def orthonormal_rows(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of the row space of ``m``."""
    a = np.asarray(m, dtype=float)
    if a.size == 0:
        return a.reshape(0, a.shape[-1] if a.ndim == 2 else 0)
    _, s, vt = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol.cutoff(s[0])))
    return vt[:rank].copy()
