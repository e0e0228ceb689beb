"""0-1 knapsack by dynamic programming over the capacity axis."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..errors import ResourceLimitError

DEFAULT_CAP_CELLS = 10**8
_INT64_SAFE = 2**62


def cap_cells() -> int:
    env = os.environ.get("DIVELECT_CAP_CELLS")
    return int(env) if env else DEFAULT_CAP_CELLS


@dataclass(frozen=True)
class KnapsackInstance:
    weights: tuple[int, ...]
    values: tuple  # ints, Fractions or floats
    capacity: int

    def __post_init__(self):
        if len(self.weights) != len(self.values):
            raise ValueError("weights and values differ in length")
        if any(w < 0 for w in self.weights):
            raise ValueError("negative item weight")


def _value_dtype(values):
    if all(isinstance(v, (int, np.integer)) for v in values):
        if sum(abs(int(v)) for v in values) < _INT64_SAFE:
            return np.int64
        return object
    if all(isinstance(v, (float, int, np.floating, np.integer)) for v in values):
        return np.float64
    return object


def knapsack_dp(instance: KnapsackInstance, *, cap: int | None = None) -> tuple[tuple[int, ...], object]:
    """Value-maximal item subset with total weight at most the capacity.

    Among optimal subsets the reconstruction prefers taking lower-indexed
    items. Returns ``(sorted item indices, total value)``.
    """
    cap = cap_cells() if cap is None else cap
    n = len(instance.weights)
    B = instance.capacity
    if B < 0:
        return (), 0
    if n * (B + 1) > cap:
        raise ResourceLimitError(f"knapsack table {n}x{B + 1} exceeds the cap of {cap} cells")

    dtype = _value_dtype(instance.values)
    zero = 0.0 if dtype is np.float64 else 0
    best = np.full(B + 1, zero, dtype=dtype)
    take = np.zeros((n, B + 1), dtype=bool)
    # items are added last-to-first so that item 0 is decided first on the way back
    for i in range(n - 1, -1, -1):
        w, v = instance.weights[i], instance.values[i]
        if w > B:
            continue
        cand = best[: B + 1 - w] + v
        keep = cand >= best[w:]
        take[i, w:] = keep
        best[w:] = np.where(keep, cand, best[w:])

    chosen = []
    c = B
    for i in range(n):
        if take[i, c]:
            chosen.append(i)
            c -= instance.weights[i]
    total = sum((instance.values[i] for i in chosen), zero)
    return tuple(chosen), total
