"""Counter-based random streams: stream(seed, i, j) is the same on every run
and independent of how work is split across threads."""

from __future__ import annotations

import numpy as np

from ..spherical import _bump


def stream(seed: int, *counter: int) -> np.random.Generator:
    if len(counter) > 3:
        raise ValueError("at most three counter words")
    words = [int(c) for c in counter] + [0] * (4 - len(counter))
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, *words[:3]]))


def random_bump_mixture(rng: np.random.Generator, lo: float = 1.0, hi: float = 4.0, max_terms: int = 4):
    """Positive mixture of 1-4 smooth bumps inside [lo, hi].

    Returns (centers, widths, weights); widths are at least a tenth of the
    interval so the mixtures stay smooth at the quadrature resolution.
    """
    m = int(rng.integers(1, max_terms + 1))
    span = hi - lo
    centers = rng.uniform(lo + 0.15 * span, hi - 0.15 * span, m)
    room = np.minimum(centers - lo, hi - centers)
    widths = rng.uniform(0.1 * span, 1.0, m)
    widths = np.minimum(widths, room)
    weights = rng.uniform(0.2, 1.0, m)
    return centers, widths, weights


def bump_mixture(x, centers, widths, weights):
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for c, w, a in zip(centers, widths, weights):
        out += a * _bump((x - c) / w)
    return out
