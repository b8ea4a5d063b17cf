"""Independent reference computations used by the tests.

Nothing here calls into the paths it checks: 2x2 singular values are closed
form, Monte Carlo draws use plain vectorized numpy generators, and the prox
oracle is a derivative-free search.
"""

import numpy as np


def sv2x2(a, b, c, d):
    """Singular values of [[a, b], [c, d]] (broadcasts over arrays)."""
    p = np.hypot(a + d, c - b)
    q = np.hypot(a - d, b + c)
    return 0.5 * (p + q), 0.5 * np.abs(p - q)


def prox_objective_2x2(x, y, lam, w):
    """0.5||y - x||^2 + lam (w0 s1 + w1 s2) for x of shape (..., 4) (row-major entries)."""
    s1, s2 = sv2x2(x[..., 0], x[..., 1], x[..., 2], x[..., 3])
    return 0.5 * np.sum((y.ravel() - x) ** 2, axis=-1) + lam * (w[0] * s1 + w[1] * s2)


def brute_force_prox_2x2(y, lam, w, rng, n_candidates=100_000):
    """Best objective from random candidates followed by compass-search refinement."""
    yv = y.ravel()
    scale = np.linalg.norm(yv) + lam
    radius = rng.uniform(0, 1, size=(n_candidates, 1)) * scale
    cand = yv + radius * rng.standard_normal((n_candidates, 4)) / 2.0
    cand[0] = 0.0
    vals = prox_objective_2x2(cand, y, lam, w)
    best = cand[np.argmin(vals)].copy()
    fbest = float(np.min(vals))
    step = 0.05 * scale
    dirs = np.vstack([np.eye(4), -np.eye(4)])
    # Include diagonal directions so kinks off the coordinate axes do not stall the search.
    diag = np.array([[1, 1, 0, 0], [0, 0, 1, 1], [1, 0, 0, 1], [0, 1, 1, 0],
                     [1, 0, 0, -1], [0, 1, -1, 0]], dtype=float) / np.sqrt(2)
    dirs = np.vstack([dirs, diag, -diag])
    while step > 1e-11:
        trial = best + step * dirs
        tv = prox_objective_2x2(trial, y, lam, w)
        k = int(np.argmin(tv))
        if tv[k] < fbest:
            best, fbest = trial[k], float(tv[k])
        else:
            step *= 0.5
    return fbest, best.reshape(2, 2)


def gaussian_blocks(rng, n, shape):
    return rng.standard_normal((n, shape.m, shape.n))


def mc_head_term(rng, shape, head, tau, n):
    """Monte Carlo of E||[G11 - tau W, G12; G21, 0]||_F^2."""
    g = gaussian_blocks(rng, n, shape)
    r = shape.r
    g[:, :r, :r] -= tau * np.diag(head)
    g[:, r:, r:] = 0.0
    vals = np.sum(g**2, axis=(1, 2))
    return vals.mean(), vals.std(ddof=1) / np.sqrt(n)


def mc_tail_term(rng, shape, tail_weight, tau, n, batch=200_000):
    """Monte Carlo of E sum_i Pos^2(sigma_i(G22) - tau * t)."""
    p, k = shape.m - shape.r, shape.n - shape.r
    vals = []
    left = n
    while left:
        b = min(batch, left)
        g = rng.standard_normal((b, p, k))
        if p == 1:
            s = np.linalg.norm(g[:, 0, :], axis=1)[:, None]
        else:
            s = np.linalg.svd(g, compute_uv=False)
        vals.append(np.sum(np.maximum(s - tau * tail_weight, 0) ** 2, axis=1))
        left -= b
    v = np.concatenate(vals)
    return v.mean(), v.std(ddof=1) / np.sqrt(n)


def grid_min_jtau(rng, shape, head, tail, n_trials, taus, batch=20_000):
    """J on a grid of tau values from fresh vectorized draws; returns (taus, J)."""
    taus = np.asarray(taus, dtype=float)
    r = shape.r
    total = np.zeros_like(taus)
    left = n_trials
    head = np.asarray(head, dtype=float)
    while left:
        b = min(batch, left)
        g = rng.standard_normal((b, shape.m, shape.n))
        diag = g[:, np.arange(r), np.arange(r)]
        rest = np.sum(g**2, axis=(1, 2)) - np.sum(g[:, r:, r:] ** 2, axis=(1, 2)) - np.sum(diag**2, axis=1)
        s = np.linalg.svd(g[:, r:, r:], compute_uv=False)
        for j, t in enumerate(taus):
            vals = rest + np.sum((diag - t * head) ** 2, axis=1) \
                + np.sum(np.maximum(s - t * tail, 0) ** 2, axis=1)
            total[j] += vals.sum()
        left -= b
    return taus, total / n_trials


def random_contraction(rng, m, n):
    """Random matrix with spectral norm <= 1."""
    q = rng.standard_normal((m, n))
    u, s, vt = np.linalg.svd(q, full_matrices=False)
    return (u * rng.uniform(0, 1, s.size)) @ vt
