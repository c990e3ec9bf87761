"""Exhaustive reference optimum over a candidate set (tests and acceptance only)."""
from __future__ import annotations

import itertools
import math

import numpy as np

DEFAULT_LIMIT = 3_000_000
CHUNK = 50_000


class OracleSizeError(RuntimeError):
    pass


def brute_force_oracle(C, inst, limit: int = DEFAULT_LIMIT) -> float | None:
    """Minimum total area over all multisets of at most ``m`` candidates.

    Containment is recomputed here from raw coordinates rather than read
    from ``C.covers``. Returns ``None`` when no multiset is feasible.
    Refuses (``OracleSizeError``) when the number of multisets exceeds
    ``limit``.
    """
    k, m = len(C), inst.m
    total = math.comb(k + m, m)
    if total > limit:
        raise OracleSizeError(f"{total} multisets of <= {m} from {k} candidates exceeds limit {limit}")
    xy = np.asarray(inst.points, dtype=np.float64)
    d = np.hypot(xy[:, None, 0] - C.centers[None, :, 0], xy[:, None, 1] - C.centers[None, :, 1])
    inside = (d <= C.radii[None, :] + 1e-9).astype(np.int16)     # (n, k)
    kappa = np.asarray(inst.kappa)
    area = math.pi * C.radii ** 2
    best = math.inf
    for size in range(1, m + 1):
        if size < kappa.max():
            continue
        combos = itertools.combinations_with_replacement(range(k), size)
        while True:
            block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, CHUNK)),
                                dtype=np.int64)
            if block.size == 0:
                break
            block = block.reshape(-1, size)
            cov = inside[:, block].sum(axis=2)              # (n, b)
            ok = np.all(cov >= kappa[:, None], axis=0)
            if ok.any():
                cost = area[block[ok]].sum(axis=1)
                best = min(best, float(cost.min()))
    return None if math.isinf(best) else best
