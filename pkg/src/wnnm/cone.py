"""Block subdifferential of the weighted nuclear norm at a planted rank-r point.

The planted point is taken in its own singular basis, ``X = [[S, 0], [0, 0]]``
with ``S`` an ``r x r`` positive diagonal. Within that basis the scaled
subdifferential is the set ``{[[tau W_r, 0], [0, tau t K]] : ||K||_2 <= 1}``
where ``W_r`` holds the head weights and ``t`` is the uniform tail weight.
A standard Gaussian matrix is rotation invariant, so distances computed in
this basis have the same law as in any other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import UsageError
from .linalg import WeightProfile, as_matrix, singular_values

__all__ = [
    "ProblemShape",
    "SubdiffDescriptor",
    "BlockPartition",
    "partition_blocks",
    "dist_sq_scaled_subdiff",
    "tail_shrinkage_sq",
    "hw_check",
]


@dataclass(frozen=True)
class ProblemShape:
    m: int
    n: int
    r: int

    def __post_init__(self):
        if not (1 <= self.m <= self.n):
            raise UsageError(f"shape needs 1 <= m <= n, got m={self.m}, n={self.n}")
        if not (0 <= self.r <= self.m):
            raise UsageError(f"rank needs 0 <= r <= m, got r={self.r}")

    @property
    def d(self) -> int:
        return self.m * self.n

    @property
    def tail_rows(self) -> int:
        return self.m - self.r

    @property
    def tail_cols(self) -> int:
        return self.n - self.r


@dataclass(frozen=True)
class SubdiffDescriptor:
    """Head weights and uniform tail weight of the subdifferential at rank ``r``."""

    shape: ProblemShape
    head_weights: tuple[float, ...]
    tail_weight: float

    def __post_init__(self):
        object.__setattr__(self, "head_weights", tuple(float(x) for x in self.head_weights))
        if len(self.head_weights) != self.shape.r:
            raise UsageError(
                f"need {self.shape.r} head weights, got {len(self.head_weights)}"
            )
        # Reuse the convex-mode checks of the weight profile.
        WeightProfile(self.head_weights, self.tail_weight, self.shape.m)

    @classmethod
    def from_profile(cls, shape: ProblemShape, w: WeightProfile) -> "SubdiffDescriptor":
        if not w.convex:
            raise UsageError("the block subdifferential needs convex-mode weights")
        if w.total_length != shape.m:
            raise UsageError(f"weight length {w.total_length} does not match m={shape.m}")
        if w.rank != shape.r:
            raise UsageError(f"weight head length {w.rank} does not match r={shape.r}")
        return cls(shape, w.head, w.tail_weight)

    @property
    def head_array(self) -> np.ndarray:
        return np.asarray(self.head_weights, dtype=float)


class BlockPartition(NamedTuple):
    g11: np.ndarray
    g12: np.ndarray
    g21: np.ndarray
    g22: np.ndarray

    def assemble(self) -> np.ndarray:
        return np.vstack([np.hstack([self.g11, self.g12]), np.hstack([self.g21, self.g22])])


def _check_dims(g: np.ndarray, shape: ProblemShape) -> None:
    if g.shape != (shape.m, shape.n):
        raise UsageError(f"matrix is {g.shape}, expected {(shape.m, shape.n)}")


def partition_blocks(g, shape: ProblemShape) -> BlockPartition:
    """Split ``g`` into the blocks conforming to a rank-``r`` leading corner."""
    g = as_matrix(g)
    _check_dims(g, shape)
    r = shape.r
    return BlockPartition(g[:r, :r], g[:r, r:], g[r:, :r], g[r:, r:])


def tail_shrinkage_sq(tail_singular_values, level: float) -> float:
    """``sum_i max(s_i - level, 0)**2``: squared distance of a block to a scaled spectral ball."""
    s = np.asarray(tail_singular_values, dtype=float)
    return float(np.sum(np.maximum(s - level, 0.0) ** 2))


def dist_sq_scaled_subdiff(g, tau: float, d: SubdiffDescriptor) -> float:
    """Squared Frobenius distance from ``g`` to ``tau`` times the subdifferential.

    The infimum over the contraction ``K`` is solved in closed form: the
    nearest point of a spectral-norm ball of radius ``tau * t`` clips the
    singular values of the tail block at that radius.

    Parameters
    ----------
    g : array_like
        ``m x n`` matrix.
    tau : float
        Dilation, ``tau >= 0``.
    d : SubdiffDescriptor
        Weights and shape of the subdifferential.
    """
    if not (np.isfinite(tau) and tau >= 0):
        raise UsageError("tau must be a nonnegative finite number")
    blocks = partition_blocks(g, d.shape)
    head = float(np.sum((blocks.g11 - tau * np.diag(d.head_array)) ** 2)) if d.shape.r else 0.0
    off = float(np.sum(blocks.g12**2) + np.sum(blocks.g21**2))
    tail = 0.0
    if d.shape.tail_rows:
        tail = tail_shrinkage_sq(singular_values(blocks.g22), tau * d.tail_weight)
    return head + off + tail


class HWCheck(NamedTuple):
    sv_gap_sq: float
    frob_sq: float


def hw_check(a, b) -> HWCheck:
    """Compare the singular-value gap of ``a`` and ``b`` with ``||a - b||_F^2``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise UsageError(f"shape mismatch {a.shape} vs {b.shape}")
    gap = float(np.sum((singular_values(a) - singular_values(b)) ** 2))
    return HWCheck(gap, float(np.sum((a - b) ** 2)))
