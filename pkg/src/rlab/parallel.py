"""Ordered thread-pool map; results never depend on the worker count."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
U = TypeVar("U")

ENV_THREADS = "RLAB_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Explicit value, else $RLAB_THREADS, else 1."""
    if threads is None:
        env = os.environ.get(ENV_THREADS, "").strip()
        threads = int(env) if env else 1
    return max(1, int(threads))


def ordered_map(fn: Callable[[T], U], items: Iterable[T], threads: int | None = None) -> list[U]:
    """Map ``fn`` over ``items`` and return results in input order.

    Each item is processed independently, so the outputs (and any reduction
    done afterwards in input order) are identical for every thread count.
    """
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as ex:
        return list(ex.map(fn, items))
