"""
Enumeration of GL_n(F_p) in batches.

Matrices are generated row by row, each new row drawn from the complement
of the span of the rows before it, so no singular matrix is ever built.
The first max(n - 2, 0) rows are enumerated up front; the resulting
prefixes are cut into chunks that are completed independently, and chunk c
belongs to worker c mod workers.
"""

import logging
from multiprocessing import Pool

import numpy as np

from fpcore.vectors import all_vectors, vector_index

logger = logging.getLogger(__name__)


def extend_rows(prefixes, p):
    """Append every row outside the span of each prefix (B, i, n)."""
    count, i, n = prefixes.shape
    vectors = all_vectors(n, p)
    coefficients = all_vectors(i, p)
    spans = np.einsum("ci,bin->bcn", coefficients, prefixes) % p
    spanned = np.zeros((count, len(vectors)), dtype=bool)
    spanned[np.arange(count)[:, None], vector_index(spans, p)] = True
    owners, rows = np.nonzero(~spanned)
    return np.concatenate([prefixes[owners], vectors[rows][:, None, :]], axis=1)


def completions(n, p, depth):
    """Number of ways to finish a prefix of `depth` independent rows."""
    total = 1
    for i in range(depth, n):
        total *= p**n - p**i
    return total


def base_prefixes(n, p, depth):
    prefixes = np.zeros((1, 0, n), dtype=np.int64)
    for _ in range(depth):
        prefixes = extend_rows(prefixes, p)
    return prefixes


def iter_general_linear(n, p, worker=0, workers=1, batch=2**18):
    """Yield (B, n, n) stacks covering this worker's share of GL_n(F_p)."""
    depth = max(n - 2, 0)
    prefixes = base_prefixes(n, p, depth)
    chunk = max(1, batch // completions(n, p, depth))
    for index, start in enumerate(range(0, len(prefixes), chunk)):
        if index % workers != worker:
            continue
        stack = prefixes[start : start + chunk]
        for _ in range(depth, n):
            stack = extend_rows(stack, p)
        logger.debug(
            "GL_%d(F_%d) chunk %d: %d matrices", n, p, index, len(stack)
        )
        yield stack


def run_sweep(function, tasks, workers):
    """Map `function` over per-worker tasks, in a process pool if workers > 1."""
    if workers == 1:
        return [function(task) for task in tasks]
    with Pool(workers) as pool:
        return pool.map(function, tasks)
