"""
Regular subgroups T = tau(A) of Aff_n(F_p).

A regular subgroup has exactly one element sending 0 to each x, namely the
one with translation x. RegularSubgroupRep therefore stores only a
(p^n, n, n) stack of linear parts, row i belonging to the map whose
translation is the i-th vector of all_vectors(n, p).
"""

import logging

import numpy as np
from django.conf import settings
from django.utils.functional import cached_property

from fpcore.field import check_prime
from fpcore.matrices import FpMatrix
from fpcore.vectors import all_vectors, vector_index

from .exceptions import SubgroupError
from .maps import AffineMap

logger = logging.getLogger(__name__)


def key_header(p, n):
    return np.array([p, n], dtype=np.uint16).tobytes()


class RegularSubgroupRep:
    def __init__(self, linear, p, algebra=None):
        check_prime(p)
        linear = np.array(linear, dtype=np.int64) % p
        if linear.ndim != 3 or linear.shape[1] != linear.shape[2]:
            raise SubgroupError(
                f"expected a stack of square matrices, got {linear.shape}"
            )
        n = linear.shape[1]
        if linear.shape[0] != p**n:
            raise SubgroupError(
                f"a regular subgroup of Aff_{n}(F_{p}) has {p**n} elements"
            )
        if not np.array_equal(linear[0], np.eye(n, dtype=np.int64)):
            raise SubgroupError("the element fixing 0 must be the identity")
        linear.setflags(write=False)
        self.p = p
        self.n = n
        self.linear = linear
        self.algebra = algebra

    def __len__(self):
        return len(self.linear)

    def __eq__(self, other):
        if not isinstance(other, RegularSubgroupRep):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self):
        return hash(self.canonical_key)

    def __repr__(self):
        return f"<RegularSubgroupRep n={self.n} p={self.p}>"

    @cached_property
    def canonical_key(self):
        """
        Bytes identifying the set of maps: a (p, n) header, then the linear
        parts in translation order. Equal keys iff equal subgroups.
        """
        return key_header(self.p, self.n) + self.linear.astype(np.uint16).tobytes()

    @property
    def translations(self):
        return all_vectors(self.n, self.p)

    def __getitem__(self, x):
        """The unique element sending 0 to x."""
        index = int(vector_index(np.array(x), self.p))
        return AffineMap(FpMatrix(self.linear[index], self.p), x, check=False)

    def maps(self):
        for x in self.translations:
            yield self[x]

    def __contains__(self, affine_map):
        if affine_map.p != self.p or affine_map.n != self.n:
            return False
        index = int(vector_index(np.array(affine_map.translation), self.p))
        return np.array_equal(self.linear[index], affine_map.linear.entries)

    def distinct_linear_parts(self):
        return len(np.unique(self.linear.reshape(len(self), -1), axis=0))

    def is_translation_group(self):
        """True iff T = lambda(G), i.e. every linear part is the identity."""
        return bool((self.linear == np.eye(self.n, dtype=np.int64)).all())


def build_subgroup(algebra):
    """
    tau(A) as a RegularSubgroupRep. Closure tau(x) tau(y) = tau(x o y) is
    checked for every pair up to HOPF_EXHAUSTIVE_LIMIT pairs and on a seeded
    sample above that.
    """
    n, p = algebra.n, algebra.p
    vectors = all_vectors(n, p)
    linear = (np.eye(n, dtype=np.int64) + algebra.left_mul_matrices(vectors)) % p
    subgroup = RegularSubgroupRep(linear, p, algebra=algebra)
    size = len(vectors)
    if size * size <= settings.HOPF_EXHAUSTIVE_LIMIT:
        rows = range(size)
        pairs = None
    else:
        rng = np.random.default_rng(settings.HOPF_SEED)
        rows = rng.integers(0, size, size=max(1, settings.HOPF_SAMPLE_SIZE // size))
        pairs = rng.integers(0, size, size=min(size, settings.HOPF_SAMPLE_SIZE))
    others = vectors if pairs is None else vectors[pairs]
    other_linear = linear if pairs is None else linear[pairs]
    for i in rows:
        # (B_x, x)(B_y, y) has translation x + B_x y, which is x o y.
        products = vector_index(vectors[i] + others @ linear[i].T, p)
        composed = np.matmul(linear[i], other_linear) % p
        bad = np.flatnonzero((composed != linear[products]).any(axis=(1, 2)))
        if bad.size:
            raise SubgroupError(
                "closure fails: tau(x) tau(y) != tau(x o y) at x={}, y={}".format(
                    tuple(vectors[i].tolist()), tuple(others[bad[0]].tolist())
                )
            )
    logger.debug("built %r from %r", subgroup, algebra)
    return subgroup


def is_normalized_by_translations(subgroup):
    """
    True iff lambda(y) T lambda(y)^-1 = T for every translation lambda(y).
    lambda(y) (B, x) lambda(-y) = (B, x + y - B y), looked up by translation.
    """
    p, n = subgroup.p, subgroup.n
    vectors = subgroup.translations
    linear = subgroup.linear
    size = len(vectors)
    if size * size <= settings.HOPF_EXHAUSTIVE_LIMIT:
        shifts = vectors
    else:
        # The basis translations generate lambda(G).
        shifts = np.eye(n, dtype=np.int64)
    for y in shifts:
        moved = (vectors + y - linear @ y) % p
        if not np.array_equal(linear[vector_index(moved, p)], linear):
            logger.debug("%r is not normalized by lambda(%s)", subgroup, y.tolist())
            return False
    return True


def conjugate_subgroup(subgroup, P):
    """
    Q T Q^-1 for Q = (P, 0). The element of the result with translation x is
    (P B P^-1, x) where (B, P^-1 x) is in T.
    """
    if not P.is_square() or P.rows != subgroup.n:
        raise SubgroupError(f"cannot conjugate by a {P.shape} matrix")
    P_inv = P.inverse()
    p = subgroup.p
    sources = vector_index(subgroup.translations @ P_inv.entries.T, p)
    linear = P.entries @ subgroup.linear[sources] % p @ P_inv.entries % p
    algebra = subgroup.algebra.pushforward(P) if subgroup.algebra is not None else None
    return RegularSubgroupRep(linear, p, algebra=algebra)
