"""Slow reference implementations used to cross-check the solvers.

Nothing here relies on minimal recovery sets, dual codewords or the
compiled kernels: recovery is decided by rank over explicit subsets.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence

import numpy as np

from .field import FiniteField
from .linalg import Matrix, _rank_array
from .recovery import Request


def span_contains(g: Matrix, subset: Sequence[int], v: Sequence[int]) -> bool:
    """Whether ``v`` is in the span of the columns ``subset`` (rank comparison)."""
    if not any(v):
        return True
    if not subset:
        return False
    cols = g.entries[:, list(subset)]
    aug = np.concatenate([cols, np.array(v, dtype=np.int64)[:, None]], axis=1)
    return _rank_array(aug, g.field) == _rank_array(cols, g.field)


def recovery_masks(g: Matrix, v: Sequence[int]) -> list[int]:
    """Every subset of columns (as a bitmask, including non-minimal ones) recovering ``v``."""
    n = g.cols
    return [m for m in range(1 << n) if span_contains(g, [j for j in range(n) if m >> j & 1], v)]


def brute_force_serve(g: Matrix, req: Request) -> bool:
    """Decide servability by trying ordered tuples of pairwise disjoint recovery sets."""
    units = req.units()
    options = {}
    for v in set(units):
        options[v] = recovery_masks(g, v)

    def go(i: int, used: int) -> bool:
        if i == len(units):
            return True
        return any(m & used == 0 and go(i + 1, used | m) for m in options[units[i]])

    return go(0, 0)


def brute_force_min_dual_supports(g: Matrix) -> list[int]:
    """Supports of the minimal nonzero dual codewords, by enumerating ``F_q^n``."""
    F = g.field
    n = g.cols
    supports = set()
    for x in itertools.product(range(F.q), repeat=n):
        if not any(x):
            continue
        prod = np.zeros(g.rows, dtype=np.int64)
        for j, c in enumerate(x):
            if c:
                prod = F.add_table[prod, F.mul_table[c, g.entries[:, j]]]
        if not prod.any():
            supports.add(sum(1 << j for j, c in enumerate(x) if c))
    return sorted(s for s in supports if not any(o != s and o & s == o for o in supports))


def random_invertible(k: int, field: FiniteField, rng: np.random.Generator) -> Matrix:
    while True:
        m = rng.integers(0, field.q, size=(k, k))
        if _rank_array(m, field) == k:
            return Matrix(m, field)
