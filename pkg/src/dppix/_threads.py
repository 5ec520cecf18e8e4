from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "DPPX_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Explicit count wins, then ``$DPPX_THREADS``, then the usable CPU count.

    ``0`` and ``None`` both mean "auto".
    """
    if threads:
        return max(1, int(threads))
    env = os.environ.get(ENV_THREADS, "").strip()
    if env and int(env) > 0:
        return int(env)
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return os.cpu_count() or 1


def run_bands(fn, total: int, threads: int | None = None) -> None:
    """Call ``fn(start, stop)`` over contiguous bands covering ``range(total)``.

    Bands write disjoint output regions, so the split never changes results.
    """
    n = min(resolve_threads(threads), total)
    if n <= 1:
        fn(0, total)
        return
    edges = [total * i // n for i in range(n + 1)]
    with ThreadPoolExecutor(max_workers=n) as pool:
        futures = [pool.submit(fn, lo, hi) for lo, hi in zip(edges, edges[1:]) if hi > lo]
        for f in futures:
            f.result()
