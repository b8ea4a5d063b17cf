"""Dense matrix primitives: SVD, matrix norms and weighted singular value thresholding.

All matrices are real ``numpy`` arrays. Weights follow the convention that
they are paired with singular values sorted in non-increasing order, so
``w[0]`` multiplies the largest singular value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericalFailure, UsageError

__all__ = [
    "SvdFactors",
    "MatrixNorms",
    "DualWitness",
    "WeightProfile",
    "ProxParams",
    "as_matrix",
    "svd",
    "norms",
    "singular_values",
    "threshold_singular_values",
    "weighted_nuclear_norm",
    "dual_witness",
    "wsvt_prox",
]

ORDER_SLACK = 1e-12


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D float array or raise :class:`UsageError`."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise UsageError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise UsageError("matrix entries must be finite")
    return arr


class SvdFactors(NamedTuple):
    """Thin SVD ``a = left @ diag(values) @ right.T`` in the input's orientation."""

    left: np.ndarray
    values: np.ndarray
    right: np.ndarray
    transposed: bool

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.values) @ self.right.T


class MatrixNorms(NamedTuple):
    frobenius: float
    spectral: float
    nuclear: float


class DualWitness(NamedTuple):
    witness: np.ndarray
    value: float


def _fix_signs(left: np.ndarray, right: np.ndarray) -> None:
    # First entry above the noise floor of each left column is made nonnegative.
    for j in range(left.shape[1]):
        col = left[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size and col[idx[0]] < 0:
            left[:, j] = -col
            right[:, j] = -right[:, j]


def svd(a) -> SvdFactors:
    """Thin singular value decomposition with a reproducible sign convention.

    Tall inputs are transposed before factoring so that the factored matrix
    always has ``rows <= cols``; the flag is kept in the result. The returned
    factors are expressed in the caller's orientation either way.

    Raises
    ------
    NumericalFailure
        If LAPACK does not converge.
    """
    arr = as_matrix(a)
    transposed = arr.shape[0] > arr.shape[1]
    work = arr.T if transposed else arr
    try:
        u, s, vt = np.linalg.svd(work, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    v = vt.T
    if transposed:
        u, v = v, u
    u = np.array(u, copy=True)
    v = np.array(v, copy=True)
    _fix_signs(u, v)
    return SvdFactors(u, s, v, transposed)


def singular_values(a) -> np.ndarray:
    arr = as_matrix(a)
    try:
        return np.linalg.svd(arr, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def norms(a) -> MatrixNorms:
    """Frobenius, spectral and nuclear norms of ``a``, all from its singular values."""
    s = singular_values(a)
    return MatrixNorms(float(np.sqrt(np.sum(s**2))), float(s[0]), float(np.sum(s)))


@dataclass(frozen=True)
class WeightProfile:
    """Weights for the singular values of a matrix with ``min(m, n) = total_length``.

    The first ``len(head)`` singular values get the head weights, the rest
    share ``tail_weight``. In convex mode the full weight vector must be
    non-descending; ``convex=False`` accepts any ordering, in which case the
    thresholding prox is no longer guaranteed to be exact.
    """

    head: tuple[float, ...]
    tail_weight: float
    total_length: int
    convex: bool = True

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(float(h) for h in self.head))
        object.__setattr__(self, "tail_weight", float(self.tail_weight))
        if self.total_length < 1:
            raise UsageError("total_length must be positive")
        if len(self.head) > self.total_length:
            raise UsageError(
                f"head has {len(self.head)} weights but total_length is {self.total_length}"
            )
        entries = (*self.head, self.tail_weight)
        if not all(np.isfinite(e) and -ORDER_SLACK <= e <= 1 + ORDER_SLACK for e in entries):
            raise UsageError("weights must lie in [0, 1]")
        if self.convex:
            if any(b < a - ORDER_SLACK for a, b in zip(self.head, self.head[1:])):
                raise UsageError("convex mode requires non-descending head weights")
            if self.head and self.has_tail and self.head[-1] > self.tail_weight + ORDER_SLACK:
                raise UsageError("convex mode requires last head weight <= tail_weight")

    @classmethod
    def ones(cls, rank: int, total_length: int) -> "WeightProfile":
        return cls((1.0,) * rank, 1.0, total_length)

    @property
    def rank(self) -> int:
        return len(self.head)

    @property
    def has_tail(self) -> bool:
        return self.total_length > len(self.head)

    def vector(self) -> np.ndarray:
        out = np.full(self.total_length, self.tail_weight)
        out[: len(self.head)] = self.head
        return out


@dataclass(frozen=True)
class ProxParams:
    lam: float

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise UsageError("lambda must be a nonnegative finite number")


def _check_length(a: np.ndarray, w: WeightProfile) -> None:
    if w.total_length != min(a.shape):
        raise UsageError(
            f"weight profile has length {w.total_length}, matrix needs {min(a.shape)}"
        )


def weighted_nuclear_norm(a, w: WeightProfile) -> float:
    """Return ``sum_i w_i * sigma_i(a)`` with singular values in non-increasing order."""
    arr = as_matrix(a)
    _check_length(arr, w)
    return float(np.dot(w.vector(), singular_values(arr)))


def dual_witness(a) -> DualWitness:
    """Spectral-norm-one matrix ``Q = U V^T`` attaining ``<Q, a> = ||a||_*``."""
    f = svd(a)
    q = f.left @ f.right.T
    return DualWitness(q, float(np.sum(q * as_matrix(a))))


def wsvt_prox(y, params: ProxParams, w: WeightProfile) -> np.ndarray:
    """Weighted singular value thresholding.

    Computes ``U diag(max(sigma_i - lam * w_i, 0)) V^T``, which minimizes
    ``0.5 * ||y - x||_F^2 + lam * ||x||_w`` when the weights are
    non-descending.

    Parameters
    ----------
    y : array_like
        Matrix to shrink.
    params : ProxParams
        Penalty ``lam``.
    w : WeightProfile
        Must be in convex mode.

    Returns
    -------
    ndarray
        Thresholded matrix of the same shape as ``y``.
    """
    if not w.convex:
        raise UsageError("wsvt_prox requires convex-mode (non-descending) weights")
    arr = as_matrix(y)
    _check_length(arr, w)
    return threshold_singular_values(arr, params.lam * w.vector())


def threshold_singular_values(y: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """``U diag(max(s - thresholds, 0)) V^T`` without input validation.

    The product does not depend on the sign convention of the factors, so
    the raw LAPACK output is used directly.
    """
    try:
        u, s, vt = np.linalg.svd(y, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    shrunk = np.maximum(s - thresholds, 0.0)
    return (u * shrunk) @ vt
