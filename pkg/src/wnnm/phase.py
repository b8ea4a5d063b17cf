"""Phase-transition experiment for weighted nuclear norm recovery.

A rank-``r`` matrix is planted, observed through ``p`` Gaussian linear
measurements and recovered by minimizing the weighted nuclear norm on the
affine set of consistent matrices. Sweeping ``p`` and recording the success
rate locates the empirical transition, which is compared with the
statistical-dimension estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import isotonic_regression

from .cone import ProblemShape
from .errors import UsageError
from .linalg import WeightProfile, threshold_singular_values
from .sdim import SdimEstimate, TrialPlan, minimize_jtau
from .seeding import mix_seed, stream

__all__ = [
    "RecoveryInstance",
    "SolverConfig",
    "SolveResult",
    "Cell",
    "PhaseSweepResult",
    "Crossing",
    "make_instance",
    "relative_error",
    "solve_wnnm",
    "sweep_phase",
    "isotonic_check",
    "crossing_and_window",
]


@dataclass(frozen=True)
class RecoveryInstance:
    """Planted matrix ``x0`` and measurements ``observations = sensing @ x0.ravel()``."""

    x0: np.ndarray
    sensing: np.ndarray
    observations: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.x0.shape

    @property
    def p(self) -> int:
        return self.sensing.shape[0]


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 5000
    feas_tol: float = 1e-7
    success_tol: float = 1e-3

    def __post_init__(self):
        if self.max_iters < 1 or self.feas_tol <= 0 or self.success_tol <= 0:
            raise UsageError("solver settings must be positive")


class SolveResult(NamedTuple):
    x_hat: np.ndarray
    residual: float
    iters: int
    converged: bool


@dataclass(frozen=True)
class Cell:
    p: int
    trials: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials


@dataclass(frozen=True)
class PhaseSweepResult:
    shape: ProblemShape
    cells: tuple[Cell, ...]
    predicted: SdimEstimate | None
    crossing: float | None = None

    @property
    def p_values(self) -> np.ndarray:
        return np.array([c.p for c in self.cells], dtype=float)

    @property
    def rates(self) -> np.ndarray:
        return np.array([c.rate for c in self.cells], dtype=float)


def make_instance(shape: ProblemShape, p: int, seed: int) -> RecoveryInstance:
    """Plant a unit-Frobenius rank-``r`` matrix and take ``p`` Gaussian measurements."""
    d = shape.d
    if not 1 <= p <= d:
        raise UsageError(f"measurement count must be in [1, {d}], got {p}")
    rng = stream(seed)
    left = rng.standard_normal((shape.m, shape.r))
    right = rng.standard_normal((shape.n, shape.r))
    x0 = left @ right.T
    norm = np.linalg.norm(x0)
    if norm > 0:
        x0 = x0 / norm
    sensing = rng.standard_normal((p, d))
    return RecoveryInstance(x0, sensing, sensing @ x0.ravel())


class _AffineProjector:
    """Orthogonal projection onto ``{x : A x = b}`` from one QR factorization of ``A^T``."""

    def __init__(self, a: np.ndarray, b: np.ndarray):
        q, r = np.linalg.qr(a.T)
        self.q = q
        # Minimum-norm solution of A x = b, which lies in range(A^T).
        self.offset = q @ np.linalg.solve(r.T, b)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return v - self.q @ (self.q.T @ v) + self.offset


def solve_wnnm(instance: RecoveryInstance, w: WeightProfile, cfg: SolverConfig) -> SolveResult:
    """Recover ``x0`` by Douglas-Rachford splitting with unit step.

    Iterates ``x = P(z)``, ``y = prox(2x - z)``, ``z += y - x`` where ``P`` is
    the affine projection and ``prox`` the weighted thresholding. Stops once
    ``||y - x||_F`` and the measurement residual of ``y`` are both below
    ``feas_tol``. The returned matrix is ``y``, the low-rank iterate.
    """
    if not w.convex:
        raise UsageError("solve_wnnm requires convex-mode weights")
    m, n = instance.shape
    proj = _AffineProjector(instance.sensing, instance.observations)
    # Unit step: thresholds are the weights themselves.
    thresholds = w.vector()
    z = np.zeros(m * n)
    y = z
    residual = math.inf
    for it in range(1, cfg.max_iters + 1):
        x = proj(z)
        y = threshold_singular_values((2.0 * x - z).reshape(m, n), thresholds).ravel()
        step = y - x
        z = z + step
        if np.linalg.norm(step) <= cfg.feas_tol:
            residual = float(np.linalg.norm(instance.sensing @ y - instance.observations))
            if residual <= cfg.feas_tol:
                return SolveResult(y.reshape(m, n), residual, it, True)
    residual = float(np.linalg.norm(instance.sensing @ y - instance.observations))
    return SolveResult(y.reshape(m, n), residual, cfg.max_iters, False)


def relative_error(x_hat: np.ndarray, x0: np.ndarray) -> float:
    scale = np.linalg.norm(x0)
    err = np.linalg.norm(x_hat - x0)
    return float(err / scale) if scale > 0 else float(err)


def trial_seed(master_seed: int, p: int, trial: int) -> int:
    return mix_seed(master_seed, p, trial)


def run_trial(shape, w, p, master_seed, trial, cfg) -> bool:
    inst = make_instance(shape, p, trial_seed(master_seed, p, trial))
    res = solve_wnnm(inst, w, cfg)
    return res.converged and relative_error(res.x_hat, inst.x0) <= cfg.success_tol


def sweep_phase(
    shape: ProblemShape,
    w: WeightProfile,
    p_grid: Sequence[int],
    trials_per_p: int,
    cfg: SolverConfig,
    master_seed: int,
    sdim_trials: int = 10_000,
    window_constant: float = 1.0,
    predict: bool = True,
) -> PhaseSweepResult:
    """Success counts per measurement count, plus the predicted transition.

    Trial ``t`` of cell ``p`` uses the instance seeded by
    ``mix_seed(master_seed, p, t)``, so two sweeps with the same seed see the
    same planted matrices and sensing operators regardless of weights.
    """
    grid = [int(p) for p in p_grid]
    if not grid:
        raise UsageError("p_grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError("p_grid must be strictly ascending")
    if trials_per_p < 1:
        raise UsageError("trials_per_p must be positive")
    for p in grid:
        if not 1 <= p <= shape.d:
            raise UsageError(f"measurement count must be in [1, {shape.d}], got {p}")
    cells = []
    for p in grid:
        wins = sum(run_trial(shape, w, p, master_seed, t, cfg) for t in range(trials_per_p))
        cells.append(Cell(p, trials_per_p, wins))
    predicted = None
    if predict:
        plan = TrialPlan(mix_seed(master_seed, 0xD1A), sdim_trials)
        predicted = minimize_jtau(shape, w, plan, window_constant=window_constant)
    result = PhaseSweepResult(shape, tuple(cells), predicted)
    return replace(result, crossing=_p50(result))


class IsotonicCheck(NamedTuple):
    fitted: np.ndarray
    residual: np.ndarray
    bound: np.ndarray
    passed: bool


def isotonic_check(result: PhaseSweepResult, n_sigma: float = 2.0) -> IsotonicCheck:
    """Test that rates are non-decreasing in ``p`` up to binomial noise.

    The rates are fit by weighted isotonic regression. Each residual must be
    within ``n_sigma`` binomial standard deviations of the fitted rate, with
    the variance floored at ``1 / (4 * trials)`` so that cells fitted at
    exactly 0 or 1 still allow a single-trial flip near the transition.
    """
    trials = np.array([c.trials for c in result.cells], dtype=float)
    fit = isotonic_regression(result.rates, weights=trials, increasing=True).x
    var = np.maximum(fit * (1 - fit), 0.25 / trials) / trials
    bound = n_sigma * np.sqrt(var)
    resid = np.abs(result.rates - fit)
    return IsotonicCheck(fit, resid, bound, bool(np.all(resid <= bound + 1e-12)))


def _p50(result: PhaseSweepResult) -> float | None:
    if not result.cells:
        return None
    trials = np.array([c.trials for c in result.cells], dtype=float)
    fit = isotonic_regression(result.rates, weights=trials, increasing=True).x
    p = result.p_values
    above = np.flatnonzero(fit >= 0.5)
    if above.size == 0 or above[0] == 0:
        return None
    k = int(above[0])
    f0, f1 = fit[k - 1], fit[k]
    return float(p[k - 1] + (0.5 - f0) / (f1 - f0) * (p[k] - p[k - 1]))


class Crossing(NamedTuple):
    p50: float | None
    window_low: float
    window_high: float
    consistent: bool | None


def crossing_and_window(result: PhaseSweepResult, window_constant: float | None = None) -> Crossing:
    """50% crossing of the (isotonic) success curve against the predicted window.

    The window is ``delta_hat +/- window_constant * sqrt(m n)``. When no pair
    of cells straddles 0.5 the crossing is ``None`` and ``consistent`` is
    undefined (``None``).
    """
    if result.predicted is None:
        raise UsageError("sweep result carries no prediction")
    c = result.predicted.window_constant if window_constant is None else window_constant
    half = c * math.sqrt(result.shape.d)
    lo, hi = result.predicted.delta_hat - half, result.predicted.delta_hat + half
    p50 = _p50(result)
    if p50 is None:
        return Crossing(None, lo, hi, None)
    return Crossing(p50, lo, hi, lo <= p50 <= hi)
