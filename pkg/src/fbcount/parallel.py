"""Worker cap shared by every parallel section.

The cap comes from ``set_threads`` (the ``--threads`` flag), else the
``FBCOUNT_THREADS`` environment variable, else the CPU count.  Results are
always returned in input order, so output does not depend on the cap.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_threads: int | None = None


def set_threads(n: int | None) -> None:
    global _threads
    if n is not None and n < 1:
        raise ValueError("thread count must be positive")
    _threads = n


def get_threads() -> int:
    if _threads is not None:
        return _threads
    env = os.environ.get("FBCOUNT_THREADS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"FBCOUNT_THREADS must be an integer, got {env!r}") from None
        if n >= 1:
            return n
    return os.cpu_count() or 1


def pmap(fn, items):
    """``[fn(x) for x in items]`` run on up to ``get_threads()`` threads."""
    items = list(items)
    n = min(get_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
