"""Batched multi-start searches used by the geometric checks.

Searches here produce evidence, not proofs: a search that finds nothing
reports the best value it reached.
"""

from __future__ import annotations

import numpy as np

from .linalg import unit_sphere


def max_scale(norm_batch, base, dirs, bound: float, symmetric: bool = True,
              t_max: float = 4.0, iters: int = 28, t_min: float = 1e-12) -> np.ndarray:
    """Largest ``t`` in ``[0, t_max]`` with ``||base + t d|| <= bound`` (and ``base - t d``).

    The constraint set in ``t`` is an interval containing 0 (convexity of the
    norm), so bisection on ``log t`` is exact up to resolution.  Returns 0 where
    even ``t_min`` is infeasible.
    """
    dirs = np.atleast_2d(dirs)
    base = np.asarray(base, dtype=float)

    def feasible(t, d):
        ok = norm_batch(base[None, :] + t[:, None] * d) <= bound
        if symmetric:
            ok &= norm_batch(base[None, :] - t[:, None] * d) <= bound
        return ok

    m = dirs.shape[0]
    lo = np.full(m, np.log(t_min))
    hi = np.full(m, np.log(t_max))
    out = np.zeros(m)
    top = feasible(np.exp(hi), dirs)
    bot = feasible(np.exp(lo), dirs)
    out[top] = t_max
    active = bot & ~top
    if np.any(active):
        lo_a, hi_a = lo[active], hi[active]
        d_a = dirs[active]
        for _ in range(iters):
            mid = 0.5 * (lo_a + hi_a)
            pts_ok = feasible(np.exp(mid), d_a)
            lo_a = np.where(pts_ok, mid, lo_a)
            hi_a = np.where(pts_ok, hi_a, mid)
        out[active] = np.exp(lo_a)
    return out


def hill_climb(objective, dim: int, rng: np.random.Generator, restarts: int = 50,
               steps: int = 30, proposals: int = 4, step0: float = 0.3,
               starts: np.ndarray | None = None):
    """Maximize ``objective`` (batched, on unit vectors of R^dim) by random-proposal ascent.

    Each restart keeps its own step size, grown on success and shrunk on
    failure.  Returns ``(best_value, best_point)``.
    """
    if dim == 0:
        return 0.0, np.zeros(0)
    x = unit_sphere(rng, restarts, dim) if starts is None else np.array(starts, dtype=float)
    restarts = x.shape[0]
    fx = objective(x)
    step = np.full(restarts, step0)
    for _ in range(steps):
        noise = rng.standard_normal((restarts, proposals, dim))
        cand = x[:, None, :] + step[:, None, None] * noise
        cand /= np.linalg.norm(cand, axis=2, keepdims=True)
        fc = objective(cand.reshape(-1, dim)).reshape(restarts, proposals)
        best = np.argmax(fc, axis=1)
        fbest = fc[np.arange(restarts), best]
        better = fbest > fx
        x[better] = cand[better, best[better]]
        fx[better] = fbest[better]
        step = np.where(better, np.minimum(step * 1.6, 2.0), np.maximum(step * 0.5, 1e-6))
    i = int(np.argmax(fx))
    return float(fx[i]), x[i]
