"""Optional thread fan-out over independent slices of work.

``KFKS_THREADS`` caps the worker count (0 = auto-detect, unset = serial).
All parallel regions write to disjoint array slices and contain no
reductions, so results are identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_executor = None
_executor_workers = 0


def worker_count() -> int:
    raw = os.environ.get("KFKS_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    if n < 0:
        return 1
    if n == 0:
        return os.cpu_count() or 1
    return n


def _get_executor(workers: int) -> ThreadPoolExecutor:
    global _executor, _executor_workers
    if _executor is None or _executor_workers != workers:
        if _executor is not None:
            _executor.shutdown(wait=False)
        _executor = ThreadPoolExecutor(max_workers=workers)
        _executor_workers = workers
    return _executor


def chunk_bounds(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    base, rem = divmod(n, parts)
    bounds = []
    lo = 0
    for p in range(parts):
        hi = lo + base + (1 if p < rem else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def run_chunked(n: int, fn) -> None:
    """Call ``fn(lo, hi)`` over a partition of ``range(n)``.

    Serial when the worker cap is 1 or the range is too small to split.
    """
    w = worker_count()
    if w <= 1 or n < 2 * w:
        fn(0, n)
        return
    ex = _get_executor(w)
    futures = [ex.submit(fn, lo, hi) for lo, hi in chunk_bounds(n, w)]
    for fut in futures:
        fut.result()
