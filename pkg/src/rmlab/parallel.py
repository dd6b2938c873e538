"""Deterministic parallel mapping.

Work units are distributed to a process pool but results are always
assembled in submission order, so a run with --jobs 8 is byte-identical to
the single-process reference run.  jobs=1 bypasses the pool entirely and is
the reference behavior.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))
