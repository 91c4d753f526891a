"""Deterministic worker pool capped by the SZ_THREADS environment variable."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List

import numpy as np


def worker_count() -> int:
    raw = os.environ.get("SZ_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, min(n, os.cpu_count() or 1))


def pmap(fn: Callable, items: Iterable) -> List:
    """Map in order; results do not depend on the worker count."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def child_seeds(seed: int, count: int) -> List[int]:
    """Independent integer seeds, one per restart, fixed by the parent seed."""
    ss = np.random.SeedSequence(seed)
    return [int(s.generate_state(1)[0]) for s in ss.spawn(count)]
