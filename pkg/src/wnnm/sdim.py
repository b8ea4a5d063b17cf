"""Statistical dimension of the weighted nuclear norm descent cone.

The statistical dimension is bounded above by

    J(tau) = E dist^2(G, tau * subdiff),   G standard Gaussian m x n,

minimized over ``tau >= 0``. ``J`` splits into a head part with a closed
form and a tail part depending only on the singular values of the
``(m - r) x (n - r)`` Gaussian block. The tail part is estimated by Monte
Carlo, and for ``m - r <= 2`` also by quadrature against the Wishart
eigenvalue density, which serves as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .cone import ProblemShape, SubdiffDescriptor
from .errors import UsageError
from .linalg import WeightProfile
from .seeding import stream

__all__ = [
    "TrialPlan",
    "JTauPoint",
    "SdimEstimate",
    "GaussianSampleSet",
    "jtau_head_closed",
    "jtau_mc",
    "log_multigamma",
    "wishart_eig_logdensity",
    "tail_expectation_quadrature",
    "minimize_jtau",
]


@dataclass(frozen=True)
class TrialPlan:
    """Reproducible set of Monte Carlo trials.

    Trial ``i`` draws from its own stream seeded by ``mix_seed(master_seed, i)``.
    """

    master_seed: int
    n_trials: int

    def __post_init__(self):
        if self.n_trials < 1:
            raise UsageError("n_trials must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise UsageError("master_seed must be a 64-bit unsigned integer")

    def rng(self, trial: int) -> np.random.Generator:
        return stream(self.master_seed, trial)


@dataclass(frozen=True)
class JTauPoint:
    tau: float
    mean: float
    stderr: float
    n_trials: int


@dataclass(frozen=True)
class SdimEstimate:
    tau_star: float
    delta_hat: float
    stderr: float
    window_constant: float
    tau_max: float
    n_trials: int


def _mean_stderr(samples: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(samples))
    if samples.size < 2:
        return mean, 0.0
    return mean, float(np.std(samples, ddof=1) / math.sqrt(samples.size))


def jtau_head_closed(shape: ProblemShape, head: Sequence[float], tau: float) -> float:
    """Exact expectation of the head and off-diagonal part of the squared distance.

    ``E||G11 - tau W_r||^2 + E||G12||^2 + E||G21||^2 = r(m + n - r) + tau^2 sum w_i^2``.
    """
    if len(head) != shape.r:
        raise UsageError(f"need {shape.r} head weights, got {len(head)}")
    if tau < 0:
        raise UsageError("tau must be nonnegative")
    r = shape.r
    return r * (shape.m + shape.n - r) + tau**2 * float(np.sum(np.square(head)))


class GaussianSampleSet:
    """Sufficient statistics of a plan's Gaussian matrices for evaluating ``J``.

    For each trial only three things matter: the diagonal of ``G11``, the
    squared norm of everything else outside ``G22``, and the singular values
    of ``G22``. Holding these fixed while ``tau`` varies gives common random
    numbers, so the empirical objective is convex in ``tau``.
    """

    def __init__(self, descriptor: SubdiffDescriptor, plan: TrialPlan):
        self.descriptor = descriptor
        self.plan = plan
        shape = descriptor.shape
        m, n, r = shape.m, shape.n, shape.r
        g = np.empty((plan.n_trials, m, n))
        for i in range(plan.n_trials):
            g[i] = plan.rng(i).standard_normal((m, n))
        idx = np.arange(r)
        self.head_diag = g[:, idx, idx]
        fixed = np.sum(g[:, :r, :] ** 2, axis=(1, 2)) + np.sum(g[:, r:, :r] ** 2, axis=(1, 2))
        self.fixed_sq = fixed - np.sum(self.head_diag**2, axis=1)
        if shape.tail_rows:
            self.tail_sv = np.linalg.svd(g[:, r:, r:], compute_uv=False)
        else:
            self.tail_sv = np.zeros((plan.n_trials, 0))

    @classmethod
    def build(cls, shape: ProblemShape, w: WeightProfile, plan: TrialPlan) -> "GaussianSampleSet":
        return cls(SubdiffDescriptor.from_profile(shape, w), plan)

    def per_trial(self, tau: float) -> np.ndarray:
        if not (np.isfinite(tau) and tau >= 0):
            raise UsageError("tau must be a nonnegative finite number")
        d = self.descriptor
        head = np.sum((self.head_diag - tau * d.head_array) ** 2, axis=1)
        tail = np.sum(np.maximum(self.tail_sv - tau * d.tail_weight, 0.0) ** 2, axis=1)
        return self.fixed_sq + head + tail

    def tail_per_trial(self, tau: float) -> np.ndarray:
        level = tau * self.descriptor.tail_weight
        return np.sum(np.maximum(self.tail_sv - level, 0.0) ** 2, axis=1)

    def __call__(self, tau: float) -> JTauPoint:
        mean, se = _mean_stderr(self.per_trial(tau))
        return JTauPoint(float(tau), mean, se, self.plan.n_trials)


def jtau_mc(shape: ProblemShape, w: WeightProfile, tau: float, plan: TrialPlan) -> JTauPoint:
    """Monte Carlo estimate of ``J(tau)`` over the trials of ``plan``."""
    return GaussianSampleSet.build(shape, w, plan)(tau)


def log_multigamma(t: float, p: int) -> float:
    """``log Gamma_p(t) = p(p-1)/4 log(pi) + sum_{i<p} log Gamma(t - i/2)``."""
    return p * (p - 1) / 4.0 * math.log(math.pi) + sum(
        float(gammaln(t - 0.5 * i)) for i in range(p)
    )


def _log_norm_const(p: int, k: int) -> float:
    return (
        0.5 * p * p * math.log(math.pi)
        - 0.5 * p * k * math.log(2.0)
        - log_multigamma(0.5 * k, p)
        - log_multigamma(0.5 * p, p)
    )


def _logdensity(lam: np.ndarray, k: int, log_c: float) -> float:
    p = lam.size
    out = log_c + 0.5 * (k - p - 1) * float(np.sum(np.log(lam))) - 0.5 * float(np.sum(lam))
    for i in range(p):
        for j in range(i + 1, p):
            gap = lam[i] - lam[j]
            if gap <= 0:
                return -math.inf
            out += math.log(gap)
    return out


def wishart_eig_logdensity(eigs: Sequence[float], p: int, n_dof: int) -> float:
    """Log joint density of the ordered eigenvalues of a ``W_p(I, n_dof)`` matrix.

    Parameters
    ----------
    eigs : sequence of float
        Eigenvalues ``l_1 >= ... >= l_p > 0``.
    p : int
        Matrix size; must equal ``len(eigs)``.
    n_dof : int
        Degrees of freedom, at least ``p``.
    """
    lam = np.asarray(eigs, dtype=float)
    if lam.ndim != 1 or lam.size != p or p < 1:
        raise UsageError(f"expected {p} eigenvalues")
    if n_dof < p:
        raise UsageError("n_dof must be at least p")
    if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise UsageError("eigenvalues must be finite and strictly positive")
    if np.any(np.diff(lam) > 0):
        raise UsageError("eigenvalues must be sorted in non-increasing order")
    return _logdensity(lam, n_dof, _log_norm_const(p, n_dof))


def tail_expectation_quadrature(shape: ProblemShape, tail_weight: float, tau: float) -> float:
    """``E sum_i max(sigma_i(G22) - tau * tail_weight, 0)^2`` by numerical integration.

    ``G22`` is ``p x k`` with ``p = m - r`` and ``k = n - r``; its squared
    singular values are the eigenvalues of a ``W_p(I, k)`` matrix. The
    integral is taken in singular-value coordinates, where the eigenvalue
    density picks up a Jacobian ``prod 2 s_i``. Only ``p`` in {1, 2} is
    supported.
    """
    p, k = shape.tail_rows, shape.tail_cols
    if tau < 0:
        raise UsageError("tau must be nonnegative")
    if p == 0:
        return 0.0
    if p > 2:
        raise UsageError(f"quadrature supports m - r <= 2, got {p}; use Monte Carlo")
    c = tau * tail_weight
    upper = c + 12.0 * math.sqrt(shape.n)
    log_c = _log_norm_const(p, k)
    opts = dict(epsabs=1e-8, epsrel=1e-10, limit=200)

    if p == 1:
        def f1(s):
            return (s - c) ** 2 * 2.0 * s * math.exp(_logdensity(np.array([s * s]), k, log_c))

        return integrate.quad(f1, c, upper, **opts)[0]

    def g(s1, s2):
        if s2 <= 0 or s1 <= s2:
            return 0.0
        lam = np.array([s1 * s1, s2 * s2])
        return 4.0 * s1 * s2 * math.exp(_logdensity(lam, k, log_c))

    def outer(s1):
        mass = integrate.quad(lambda s2: g(s1, s2), 0.0, s1, **opts)[0]
        val = (s1 - c) ** 2 * mass
        if s1 > c:
            val += integrate.quad(lambda s2: (s2 - c) ** 2 * g(s1, s2), c, s1, **opts)[0]
        return val

    return integrate.quad(outer, c, upper, **opts)[0]


def _ternary(fun, lo: float, hi: float, tol: float) -> float:
    while hi - lo > tol:
        a = lo + (hi - lo) / 3.0
        b = hi - (hi - lo) / 3.0
        if fun(a) <= fun(b):
            hi = b
        else:
            lo = a
    return 0.5 * (lo + hi)


def minimize_jtau(
    shape: ProblemShape,
    w: WeightProfile,
    plan: TrialPlan,
    tol: float = 1e-4,
    window_constant: float = 1.0,
    samples: GaussianSampleSet | None = None,
) -> SdimEstimate:
    """Minimize the sample-average ``J`` over ``tau`` by ternary search.

    All evaluations share the trials of ``plan``. The search bracket starts
    at ``[0, 4(sqrt(m) + sqrt(n))]`` and its right end doubles while the
    objective is still decreasing there.
    """
    if tol <= 0:
        raise UsageError("tol must be positive")
    if samples is None:
        samples = GaussianSampleSet.build(shape, w, plan)

    def fun(t):
        return float(np.mean(samples.per_trial(t)))

    hi = 4.0 * (math.sqrt(shape.m) + math.sqrt(shape.n))
    for _ in range(60):
        if fun(hi) < fun(max(hi - tol, 0.0)):
            hi *= 2.0
        else:
            break
    tau_star = _ternary(fun, 0.0, hi, tol)
    point = samples(tau_star)
    return SdimEstimate(tau_star, point.mean, point.stderr, float(window_constant), hi, plan.n_trials)
