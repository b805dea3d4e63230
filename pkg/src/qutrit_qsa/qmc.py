"""Scrambled Sobol' point streams with deterministic per-replicate seeding."""
from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.stats import qmc

CHUNK = 1 << 16


def thread_count(requested: int | None = None) -> int:
    """Worker count: ``requested`` if given, else ``QSA_THREADS`` capped by CPU count."""
    if requested is not None:
        return max(1, int(requested))
    cap = os.environ.get("QSA_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def child_seeds(seed, count: int) -> list[np.random.SeedSequence]:
    """Independent seed sequences for ``count`` replicates (or cells)."""
    if isinstance(seed, np.random.SeedSequence):
        return seed.spawn(count)
    return np.random.SeedSequence(seed).spawn(count)


def sobol_chunks(dim: int, n: int, seed, chunk: int = CHUNK):
    """Yield ``n`` scrambled Sobol' points in ``[0, 1)^dim``, in blocks of ``chunk``.

    All full blocks are powers of two. Only a trailing partial block breaks
    the net balance, so the resulting warning is silenced.
    """
    engine = qmc.Sobol(dim, scramble=True, seed=np.random.default_rng(seed))
    remaining = n
    while remaining > 0:
        m = min(chunk, remaining)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            yield engine.random(m)
        remaining -= m


def sobol_points(dim: int, n: int, seed) -> np.ndarray:
    return np.concatenate(list(sobol_chunks(dim, n, seed)), axis=0)


def map_ordered(func, items, threads: int | None = None) -> list:
    """``[func(i) for i in items]`` evaluated on a thread pool; output order follows input."""
    items = list(items)
    workers = min(thread_count(threads), len(items)) or 1
    if workers == 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
