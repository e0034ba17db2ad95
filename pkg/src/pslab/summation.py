"""Deterministic parallel reductions.

Work is split into chunks whose boundaries depend only on the range, never
on the worker count, and each chunk is reduced with ``math.fsum``. Partial
results are then combined in chunk order, so the answer is bit-identical
for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, Tuple, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_CHUNK = 1 << 16


def chunk_bounds(lo: int, hi: int, chunk: int = DEFAULT_CHUNK) -> List[Tuple[int, int]]:
    """Split the half-open integer range [lo, hi) into fixed-size pieces."""
    if hi <= lo:
        return []
    return [(a, min(a + chunk, hi)) for a in range(lo, hi, chunk)]


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Order-preserving map, threaded when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fsum_complex(values: Iterable[complex]) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def fsum_array(z: np.ndarray) -> complex:
    """Correctly rounded sum of a complex (or real) array."""
    z = np.asarray(z)
    if np.iscomplexobj(z):
        return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))
    return float(math.fsum(z.tolist()))
