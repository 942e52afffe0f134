"""
The isomorphism b = xi from (F_p^n, +) onto the circle group of a chain
algebra, its inverse, and the embedding alpha(g) = b^-1 lambda(g) b into the
permutations of F_p^n.

For the chain algebra with basis z, z^2, ..., z^n,

    b(r) = (1 + z)^r_1 (1 + z^2)^r_2 ... (1 + z^n)^r_n - 1

and every table below is indexed in the all_vectors(n, p) order.
"""

import logging
from functools import lru_cache
from math import comb

import numpy as np
from django.conf import settings
from django.utils.functional import cached_property

from fpcore.field import check_prime, inverse_mod
from fpcore.matrices import FpMatrix
from fpcore.vectors import all_vectors, as_vector, vector_index
from nilalg.families import FAMILY_CHAIN, chain_algebra

from .exceptions import ChainError, PrimeTooSmall
from .truncated import TruncatedPoly, batch_log, batch_mul, unit_pow

logger = logging.getLogger(__name__)


class PermTable:
    """A permutation of F_p^n stored as the image index of every vector."""

    def __init__(self, images, n, p):
        self.images = np.asarray(images, dtype=np.int64)
        self.n = n
        self.p = p

    def __call__(self, x):
        index = int(vector_index(np.array(as_vector(x, self.p, self.n)), self.p))
        return tuple(int(v) for v in all_vectors(self.n, self.p)[self.images[index]])

    def __eq__(self, other):
        if not isinstance(other, PermTable):
            return NotImplemented
        return (self.n, self.p) == (other.n, other.p) and np.array_equal(
            self.images, other.images
        )

    def __hash__(self):
        return hash(self.images.tobytes())

    def __matmul__(self, other):
        """(self @ other)(x) = self(other(x))."""
        return PermTable(self.images[other.images], self.n, self.p)

    def is_bijection(self):
        return len(np.unique(self.images)) == self.p**self.n

    def is_identity(self):
        return np.array_equal(self.images, np.arange(self.p**self.n))


class ChainMaps:
    def __init__(self, n, p):
        check_prime(p)
        if p <= n:
            raise PrimeTooSmall(f"requires p > n (p={p}, n={n})")
        self.n = n
        self.p = p
        self.algebra = chain_algebra(n, p)

    def __repr__(self):
        return f"<ChainMaps n={self.n} p={self.p}>"

    @cached_property
    def vectors(self):
        return all_vectors(self.n, self.p)

    @cached_property
    def _generator_powers(self):
        """[i, r] -> coefficients of (1 + z^(i+1))^r for r in range(p)."""
        n, p = self.n, self.p
        powers = np.zeros((n, p, n + 1), dtype=np.int64)
        for i in range(n):
            base = TruncatedPoly.one(n, p) + TruncatedPoly.monomial(i + 1, n, p)
            current = TruncatedPoly.one(n, p)
            for r in range(p):
                powers[i, r] = current.coefficients
                current = current * base
        return powers

    @cached_property
    def _log_basis_inverse(self):
        """
        Inverse of the matrix whose column i is log(1 + z^(i+1)) in the basis
        z, ..., z^n. The matrix is lower unitriangular.
        """
        n, p = self.n, self.p
        units = np.zeros((n, n + 1), dtype=np.int64)
        units[:, 0] = 1
        units[np.arange(n), np.arange(1, n + 1)] = 1
        logs = batch_log(units, p)[:, 1:]
        return FpMatrix(logs.T, p).inverse().entries

    def b_many(self, rs):
        rs = np.asarray(rs, dtype=np.int64) % self.p
        product = np.zeros((len(rs), self.n + 1), dtype=np.int64)
        product[:, 0] = 1
        for i in range(self.n):
            product = batch_mul(product, self._generator_powers[i, rs[:, i]], self.p)
        return product[:, 1:]

    def b_inverse_many(self, ss):
        """Solve sum r_i log(1 + z^i) = log(1 + s) for r."""
        ss = np.asarray(ss, dtype=np.int64) % self.p
        units = np.concatenate([np.ones((len(ss), 1), dtype=np.int64), ss], axis=1)
        logs = batch_log(units, self.p)[:, 1:]
        return logs @ self._log_basis_inverse.T % self.p

    def b_map(self, r):
        r = as_vector(r, self.p, self.n)
        return tuple(int(v) for v in self.b_many([r])[0])

    def b_inverse(self, s):
        s = as_vector(s, self.p, self.n)
        return tuple(int(v) for v in self.b_inverse_many([s])[0])

    @cached_property
    def b_table(self):
        """Row i is b(v_i)."""
        table = self.b_many(self.vectors)
        table.setflags(write=False)
        return table

    @cached_property
    def b_index(self):
        return vector_index(self.b_table, self.p)

    @cached_property
    def b_inverse_index(self):
        """Index of b^-1(v_i), taken from the log-based solver."""
        return vector_index(self.b_inverse_many(self.vectors), self.p)

    def alpha_images(self, gs):
        """(B, p^n) table: [g, gamma] -> index of b^-1(g + b(gamma))."""
        gs = np.asarray(gs, dtype=np.int64)
        moved = vector_index(gs[:, None, :] + self.b_table[None, :, :], self.p)
        return self.b_inverse_index[moved]

    def alpha_perm(self, g):
        g = as_vector(g, self.p, self.n)
        return PermTable(self.alpha_images([g])[0], self.n, self.p)

    @cached_property
    def alpha_table(self):
        size = len(self.vectors)
        if size * size > settings.HOPF_EXHAUSTIVE_LIMIT:
            raise ChainError(
                f"the alpha table has {size * size} entries, more than "
                f"HOPF_EXHAUSTIVE_LIMIT={settings.HOPF_EXHAUSTIVE_LIMIT}"
            )
        logger.debug("building the alpha table for %r", self)
        table = self.alpha_images(self.vectors)
        table.setflags(write=False)
        return table

    def xi_power(self, x, s):
        """The s-th circle power of x, read off (1 + x)^s."""
        x = as_vector(x, self.p, self.n)
        return unit_pow(TruncatedPoly.unit(x, self.p), s).tail

    def conjugation_target(self, g, t):
        """g + g * b(t): lambda(t) alpha(g) lambda(t)^-1 = alpha(g + g * b(t))."""
        g = as_vector(g, self.p, self.n)
        gb = self.algebra.multiply(g, self.b_map(t))
        return tuple((a + c) % self.p for a, c in zip(g, gb))


@lru_cache(maxsize=16)
def chain_maps(n, p):
    return ChainMaps(n, p)


def maps_for(algebra):
    if algebra.family_tag == FAMILY_CHAIN:
        return chain_maps(algebra.n, algebra.p)
    if algebra != chain_algebra(algebra.n, algebra.p):
        raise ChainError("expected the chain algebra in the basis z, z^2, ..., z^n")
    return chain_maps(algebra.n, algebra.p)


def b_map(algebra, r):
    return maps_for(algebra).b_map(r)


def b_inverse(algebra, s):
    return maps_for(algebra).b_inverse(s)


def alpha_perm(algebra, g):
    return maps_for(algebra).alpha_perm(g)


def xi_power(algebra, x, s):
    return maps_for(algebra).xi_power(x, s)


# Explicit formulas for n = 3.


def b_closed_form_n3(r, p):
    r1, r2, r3 = as_vector(r, p, 3)
    return as_vector((r1, r2 + comb(r1, 2), r3 + r1 * r2 + comb(r1, 3)), p)


def b_inverse_closed_form_n3(s, p):
    s1, s2, s3 = as_vector(s, p, 3)
    return as_vector((s1, s2 - comb(s1, 2), s3 - s1 * s2 + 2 * comb(s1 + 1, 3)), p)


def alpha_closed_form_n3(r, x, p):
    """alpha(r)(x) written out with the halves and thirds of F_p (p > 3)."""
    if p <= 3:
        raise PrimeTooSmall(f"requires p > 3, not {p}")
    r1, r2, r3 = as_vector(r, p, 3)
    x1, x2, x3 = as_vector(x, p, 3)
    half = inverse_mod(2, p)
    third = inverse_mod(3, p)
    second = r2 + x2 - r1 * r1 * half - r1 * x1 + r1 * half
    f = (
        r3
        + x3
        - r1 * r2
        - r1 * x2
        - r2 * x1
        - r1 * third
        + r1 * x1 * half
        + r1**3 * third
        + r1 * r1 * x1
        + r1 * x1 * x1 * half
    )
    return as_vector((r1 + x1, second, f), p)
