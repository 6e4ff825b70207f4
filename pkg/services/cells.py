"""
Cell enumeration, per-cell seeding and the worker pool shared by the services.
"""
import zlib
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def cell_rng(seed: int, label: str, *coords: int) -> np.random.Generator:
    """
    Generator for one cell, derived from the master seed, a label and the
    cell coordinates; independent of scheduling order.
    """
    key = (zlib.crc32(label.encode()),) + tuple(int(c) for c in coords)
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def run_cells(function: Callable[[T], R], cells: Iterable[T], workers: int = 1) -> list[R]:
    """Map function over cells, in a process pool when workers > 1; results keep cell order."""
    cells = list(cells)
    if workers <= 1 or len(cells) <= 1:
        return [function(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, cells))
