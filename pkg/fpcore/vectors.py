"""
The fixed enumeration of F_p^n shared by every table in the project.

Vectors are listed lexicographically with the first coordinate most
significant, so vector_index(all_vectors(n, p), p) == arange(p**n).
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _all_vectors(n, p):
    vectors = np.stack(
        np.unravel_index(np.arange(p**n, dtype=np.int64), (p,) * n), axis=-1
    ).astype(np.int64)
    vectors.setflags(write=False)
    return vectors


def all_vectors(n, p):
    """Read-only (p**n, n) array of every vector of F_p^n."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return _all_vectors(n, p)


def vector_index(vectors, p):
    """Index of each vector (last axis) in the all_vectors() order."""
    vectors = np.asarray(vectors, dtype=np.int64) % p
    n = vectors.shape[-1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return vectors @ weights


def as_vector(coords, p, n=None):
    """Canonical tuple of residues, with an optional length check."""
    vector = tuple(int(c) % p for c in coords)
    if n is not None and len(vector) != n:
        raise ValueError(f"expected a vector of length {n}, got {len(vector)}")
    return vector
