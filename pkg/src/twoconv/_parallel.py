"""Slice-based fan-out for the compiled kernels.

Tasks receive disjoint index ranges and all arithmetic is exact, so any
partitioning yields bitwise-identical results.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor

_pool = None
_pool_lock = threading.Lock()


def default_workers() -> int:
    return os.cpu_count() or 1


def _shared_pool() -> ThreadPoolExecutor:
    global _pool
    if _pool is None:
        with _pool_lock:
            if _pool is None:
                _pool = ThreadPoolExecutor(
                    max_workers=max(32, 2 * default_workers()),
                    thread_name_prefix="twoconv",
                )
    return _pool


def run_sliced(n_items, workers, fn, min_items_per_task=16):
    """Invoke fn(lo, hi) over an even partition of range(n_items).

    At most `workers` tasks run at a time; small inputs stay on the calling
    thread.  Returns the list of per-task results.
    """
    if n_items <= 0:
        return []
    k = max(1, min(workers or 1, n_items // min_items_per_task or 1))
    if k == 1:
        return [fn(0, n_items)]
    step = -(-n_items // k)
    pool = _shared_pool()
    futures = [
        pool.submit(fn, lo, min(lo + step, n_items))
        for lo in range(0, n_items, step)
    ]
    return [f.result() for f in futures]
