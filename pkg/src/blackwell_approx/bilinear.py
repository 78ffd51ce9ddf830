"""Bilinear vector-valued losses ``[l(x, y)]_i = x^T L_i y``."""
from __future__ import annotations

import numpy as np


class DimensionError(ValueError):
    """Raised when vector or matrix shapes do not agree."""


def as_vector(v, dim=None, name="vector"):
    arr = np.asarray(v, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


class BilinearLoss:
    """A bilinear map ``R^n x R^m -> R^d`` stored as a stack of ``d`` matrices.

    Every matrix must be entrywise nonnegative, which is equivalent to the
    loss being nonnegative on ``R^n_+ x R^m_+`` (take ``x = e_j``, ``y = e_k``).

    Parameters
    ----------
    mats : array_like, shape (d, n, m)
        The matrices ``L_1, ..., L_d``.
    """

    def __init__(self, mats):
        mats = np.array(mats, dtype=float)
        if mats.ndim != 3:
            raise DimensionError(f"expected a (d, n, m) stack of matrices, got shape {mats.shape}")
        if min(mats.shape) < 1:
            raise DimensionError("empty loss matrices")
        if not np.all(np.isfinite(mats)):
            raise ValueError("loss matrices have non-finite entries")
        if np.any(mats < 0):
            raise ValueError("loss matrices must be entrywise nonnegative")
        mats.setflags(write=False)
        self.mats = mats
        self.norm_bound = loss_norm_bound(mats)

    @property
    def d(self):
        return self.mats.shape[0]

    @property
    def n(self):
        return self.mats.shape[1]

    @property
    def m(self):
        return self.mats.shape[2]

    def __call__(self, x, y):
        return eval_loss(self, x, y)

    def weighted(self, w):
        return weighted_matrix(self, w)

    def __repr__(self):
        return f"BilinearLoss(d={self.d}, n={self.n}, m={self.m})"


def eval_loss(loss, x, y):
    """Return the vector with entries ``x^T L_i y``."""
    x = as_vector(x, loss.n, "x")
    y = as_vector(y, loss.m, "y")
    return (loss.mats @ y) @ x


def weighted_matrix(loss, w, tol=1e-9):
    """Return ``A = sum_i w_i L_i`` so that ``<w, l(x, y)> = x^T A y``."""
    w = as_vector(w, loss.d, "w")
    if np.linalg.norm(w) > 1.0 + tol:
        raise ValueError(f"weight vector must lie in the unit ball, |w| = {np.linalg.norm(w)}")
    return np.tensordot(w, loss.mats, axes=1)


def loss_norm_bound(loss):
    """Upper bound ``sqrt(sum_i |L_i|_F^2)`` on ``max_{|u|<=1} |sum_i u_i L_i|_2``."""
    mats = loss.mats if isinstance(loss, BilinearLoss) else np.asarray(loss, dtype=float)
    return float(np.sqrt(np.sum(mats * mats)))


def spectral_norm(A, iters=200, seed=0):
    """Largest singular value of ``A`` by power iteration on ``A^T A``."""
    A = np.asarray(A, dtype=float)
    if not np.any(A):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(iters):
        u = A.T @ (A @ v)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0
        v = u / nu
        sigma = np.linalg.norm(A @ v)
    return float(sigma)
