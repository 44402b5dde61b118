"""Shared test utilities."""

from __future__ import annotations

import numpy as np


def sample_feasible_points(n: int, N: int, T: float, count: int, seed: int,
                           spread: float = 0.9) -> np.ndarray:
    """Random points of the constraint region {x_i > 0, prod x = N, sum x^2 <= T}.

    Draws log-uniform positive tuples, rescales each to product exactly N,
    keeps those inside the T2 ball.  Returns an array of shape (kept, n);
    raises if the acceptance rate collapses (wrong T/N for the test).
    """
    rng = np.random.default_rng(seed)
    kept = []
    total = 0
    while sum(len(k) for k in kept) < count:
        draw = rng.uniform(-spread, spread, size=(4 * count, n))
        x = np.exp(draw)
        scale = (N / x.prod(axis=1)) ** (1.0 / n)
        x *= scale[:, None]
        ok = (x * x).sum(axis=1) <= T
        kept.append(x[ok])
        total += 4 * count
        if total > 400 * count:
            raise RuntimeError(f"sampler acceptance collapsed for n={n}, N={N}, T={T}")
    return np.concatenate(kept)[:count]
