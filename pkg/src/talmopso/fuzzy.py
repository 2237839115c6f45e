"""Fuzzy best-compromise selection on a Pareto front."""

from __future__ import annotations

import numpy as np


def fuzzy_membership(front) -> np.ndarray:
    """Linear membership of every front point in every objective.

    Each column is 1 at that objective's minimum, 0 at its maximum and
    linear in between. A flat column (max == min) is all ones.
    """
    J = np.asarray([(p.j1, p.j2) if hasattr(p, "j1") else tuple(p) for p in front], dtype=float)
    if J.size == 0:
        raise ValueError("fuzzy membership of an empty front")
    J = J.reshape(len(J), -1)
    lo = J.min(axis=0)
    hi = J.max(axis=0)
    span = hi - lo
    mu = np.ones_like(J)
    varying = span > 0
    mu[:, varying] = (hi[varying] - J[:, varying]) / span[varying]
    return np.clip(mu, 0.0, 1.0)


def normalized_membership(front) -> np.ndarray:
    mu = fuzzy_membership(front)
    total = mu.sum()
    if total <= 0:
        raise ValueError("membership sums to zero; front is degenerate")
    return mu.sum(axis=1) / total


def best_compromise(front) -> int:
    """Index of the front point with the largest normalized membership (first on ties)."""
    return int(np.argmax(normalized_membership(front)))
