"""Exact maximum-weight clique for the small graphs this library works with.

Branch and bound over a static vertex order with a remaining-weight bound.
Graphs here are class graphs of relational words, so a few dozen vertices at
most; no approximation is needed.
"""

from __future__ import annotations

from typing import Sequence


def max_weight_clique(weights: Sequence[int], adj: Sequence[set[int]]) -> int:
    """Largest total weight of a set of pairwise adjacent vertices.

    The empty clique has weight 0.  Deterministic for a given input.
    """
    n = len(weights)
    order = sorted(range(n), key=lambda v: (-weights[v], v))
    best = 0

    def expand(candidates: list[int], current: int) -> None:
        nonlocal best
        if current > best:
            best = current
        remaining = current + sum(weights[v] for v in candidates)
        if remaining <= best:
            return
        for idx, v in enumerate(candidates):
            remaining_here = current + sum(weights[u] for u in candidates[idx:])
            if remaining_here <= best:
                return
            expand([u for u in candidates[idx + 1 :] if u in adj[v]], current + weights[v])

    expand(order, 0)
    return best
