"""
Commutative nilpotent algebra structures on (F_p^n, +).

An algebra is a dense structure tensor c of shape (n, n, n) with
x_i * x_j = sum_k c[i, j, k] x_k. Elements are plain tuples of residues;
the vectorised helpers take (B, n) arrays of coordinates.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from fpcore.field import check_prime
from fpcore.matrices import FpMatrix, row_reduce
from fpcore.vectors import all_vectors, vector_index

from .exceptions import DimensionMismatch, NotNilpotent, StructureMatrixError

logger = logging.getLogger(__name__)


@dataclass
class ValidationReport:
    n: int
    p: int
    commutative: bool = True
    associative: bool = True
    nilpotent: bool = True
    commutativity_violation: tuple = None
    associativity_violation: tuple = None
    nilpotency_index: int = None
    power_dims: list = field(default_factory=list)

    @property
    def passed(self):
        return self.commutative and self.associative and self.nilpotent

    def lines(self):
        yield f"commutativity: {'pass' if self.commutative else 'FAIL'}" + (
            ""
            if self.commutative
            else " at (i, j) = {}".format(self.commutativity_violation)
        )
        yield f"associativity: {'pass' if self.associative else 'FAIL'}" + (
            ""
            if self.associative
            else " at (i, j, k) = {}".format(self.associativity_violation)
        )
        if self.nilpotent:
            yield f"nilpotency: pass (index {self.nilpotency_index})"
        else:
            yield "nilpotency: FAIL (powers stabilise at dimension {})".format(
                self.power_dims[-1]
            )
        yield "dim A^k: {}".format(self.power_dims)

    def as_dict(self):
        return {
            "p": self.p,
            "n": self.n,
            "passed": self.passed,
            "commutative": self.commutative,
            "associative": self.associative,
            "nilpotent": self.nilpotent,
            "commutativity_violation": self.commutativity_violation,
            "associativity_violation": self.associativity_violation,
            "nilpotency_index": self.nilpotency_index,
            "power_dims": self.power_dims,
        }


class NilpotentAlgebra:
    """
    The structure tensor is stored reduced mod p and read-only. `family` is
    None for tensors read verbatim, or a (tag, payload) pair set by the
    constructors in nilalg.families.
    """

    def __init__(self, structure, p, family=None):
        check_prime(p)
        structure = np.array(structure, dtype=np.int64)
        if structure.ndim != 3 or len(set(structure.shape)) != 1:
            raise DimensionMismatch(
                f"structure tensor must be n x n x n, got shape {structure.shape}"
            )
        if structure.shape[0] < 1:
            raise DimensionMismatch("dimension must be at least 1")
        structure %= p
        structure.setflags(write=False)
        self.p = p
        self.n = structure.shape[0]
        self.structure = structure
        self.family = family

    def __eq__(self, other):
        if not isinstance(other, NilpotentAlgebra):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.structure, other.structure)

    def __hash__(self):
        return hash((self.p, self.structure.tobytes()))

    def __repr__(self):
        tag = self.family[0] if self.family else "tensor"
        return f"<NilpotentAlgebra {tag} n={self.n} p={self.p}>"

    @property
    def family_tag(self):
        return self.family[0] if self.family else None

    def element(self, coords):
        coords = tuple(int(c) % self.p for c in coords)
        if len(coords) != self.n:
            raise DimensionMismatch(
                f"expected {self.n} coordinates, got {len(coords)}"
            )
        return coords

    def zero(self):
        return (0,) * self.n

    def basis(self, i):
        return tuple(int(i == j) for j in range(self.n))

    # Products

    def multiply(self, x, y):
        x = np.array(self.element(x), dtype=np.int64)
        y = np.array(self.element(y), dtype=np.int64)
        product = np.einsum("i,j,ijk->k", x, y, self.structure) % self.p
        return tuple(int(v) for v in product)

    def multiply_many(self, xs, ys):
        """Row-wise products of two (B, n) coordinate arrays."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        return np.einsum("bi,bj,ijk->bk", xs, ys, self.structure) % self.p

    def left_mul_matrix(self, x):
        """Matrix of y -> x * y; column j is x * e_j."""
        x = np.array(self.element(x), dtype=np.int64)
        return FpMatrix(np.einsum("i,ijk->kj", x, self.structure), self.p)

    def left_mul_matrices(self, xs):
        """Stack of left multiplication matrices for a (B, n) array."""
        xs = np.asarray(xs, dtype=np.int64)
        return np.einsum("bi,ijk->bkj", xs, self.structure) % self.p

    def _triple_products(self):
        """t[i, j, k] = (x_i x_j) x_k and its reassociation x_i (x_j x_k)."""
        c = self.structure
        left = np.einsum("ijl,lkm->ijkm", c, c) % self.p
        right = np.einsum("jkl,ilm->ijkm", c, c) % self.p
        return left, right

    # Structure

    def power_dims(self, strict=True):
        """
        [dim A, dim A^2, ...] down to 0. A^(k+1) is spanned by the products
        of a basis of A^k with the standard basis.

        With strict=False a non-nilpotent tensor returns the sequence up to
        the dimension where it stabilises instead of raising NotNilpotent.
        """
        basis = np.eye(self.n, dtype=np.int64)
        dims = [self.n]
        while dims[-1]:
            products = np.einsum("ri,ijk->rjk", basis, self.structure) % self.p
            echelon, pivots = row_reduce(products.reshape(-1, self.n), self.p)
            if len(pivots) == dims[-1]:
                if strict:
                    raise NotNilpotent(
                        f"A^k stabilises at dimension {dims[-1]}; not nilpotent"
                    )
                break
            basis = echelon[: len(pivots)]
            dims.append(len(pivots))
        return dims

    def cube_is_zero(self):
        left, _ = self._triple_products()
        return not left.any()

    def square_dim(self):
        return self.power_dims(strict=False)[1] if self.n else 0

    def validate(self):
        report = ValidationReport(n=self.n, p=self.p)
        c = self.structure
        asymmetric = np.argwhere((c != c.transpose(1, 0, 2)).any(axis=2))
        if asymmetric.size:
            report.commutative = False
            report.commutativity_violation = tuple(int(v) for v in asymmetric[0])
        left, right = self._triple_products()
        mismatched = np.argwhere((left != right).any(axis=3))
        if mismatched.size:
            report.associative = False
            report.associativity_violation = tuple(int(v) for v in mismatched[0])
        report.power_dims = self.power_dims(strict=False)
        report.nilpotent = report.power_dims[-1] == 0
        if report.nilpotent:
            report.nilpotency_index = len(report.power_dims)
        logger.debug("validated %r: %s", self, report.as_dict())
        return report

    # Circle group

    def circle_mul(self, x, y):
        x, y = self.element(x), self.element(y)
        xy = self.multiply(x, y)
        return tuple((a + b + c) % self.p for a, b, c in zip(x, y, xy))

    def circle_mul_many(self, xs, ys):
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        return (xs + ys + self.multiply_many(xs, ys)) % self.p

    def circle_inv(self, x):
        """-x + x^2 - x^3 + ..., which stops since x^(n+1) = 0."""
        x = self.element(x)
        term = tuple(-v % self.p for v in x)
        result = self.zero()
        for _ in range(self.n):
            result = tuple((a + b) % self.p for a, b in zip(result, term))
            term = tuple(-v % self.p for v in self.multiply(term, x))
        return result

    def circle_inv_many(self, xs):
        xs = np.asarray(xs, dtype=np.int64)
        term = -xs % self.p
        result = np.zeros_like(xs)
        for _ in range(self.n):
            result = (result + term) % self.p
            term = -self.multiply_many(term, xs) % self.p
        return result

    def circle_power(self, x, s):
        if s < 0:
            raise ValueError(f"circle powers need s >= 0, not {s}")
        result = self.zero()
        square = self.element(x)
        while s:
            if s & 1:
                result = self.circle_mul(result, square)
            square = self.circle_mul(square, square)
            s >>= 1
        return result

    def circle_power_many(self, xs, s):
        xs = np.asarray(xs, dtype=np.int64)
        result = np.zeros_like(xs)
        square = xs
        while s:
            if s & 1:
                result = self.circle_mul_many(result, square)
            square = self.circle_mul_many(square, square)
            s >>= 1
        return result

    def circle_table(self):
        """
        (p^n, p^n) table of vector indices: entry [i, j] is the index of
        v_i o v_j in the all_vectors() order.
        """
        vectors = all_vectors(self.n, self.p)
        size = len(vectors)
        left = np.repeat(vectors, size, axis=0)
        right = np.tile(vectors, (size, 1))
        products = self.circle_mul_many(left, right)
        return vector_index(products, self.p).reshape(size, size)

    def circle_group_is_elementary_abelian(self, seed=None):
        """
        True iff every element has circle order dividing p. Exhaustive up to
        HOPF_EXHAUSTIVE_LIMIT elements, sampled above it.
        """
        if self.p**self.n <= settings.HOPF_EXHAUSTIVE_LIMIT:
            xs = all_vectors(self.n, self.p)
        else:
            rng = np.random.default_rng(settings.HOPF_SEED if seed is None else seed)
            xs = rng.integers(0, self.p, size=(settings.HOPF_SAMPLE_SIZE, self.n))
            logger.info(
                "sampling %d of %d elements for the exponent check",
                len(xs),
                self.p**self.n,
            )
        return not self.circle_power_many(xs, self.p).any()

    # Changes of basis

    def pushforward(self, P):
        """
        The algebra transported along P in GL_n: u *' v = P((P^-1 u)(P^-1 v)).
        Conjugating tau(A) by (P, 0) inside Aff_n gives tau of this algebra.
        """
        Q = P.inverse().entries
        p = self.p
        structure = np.einsum("ai,abm->ibm", Q, self.structure) % p
        structure = np.einsum("bj,ibm->ijm", Q, structure) % p
        structure = np.einsum("km,ijm->ijk", P.entries, structure)
        return NilpotentAlgebra(structure, self.p)

    def square_line(self):
        """
        For dim A^2 <= 1 and A^3 = 0, return (Phi, G) where G in GL_n moves a
        spanning vector of A^2 to e_{n-1} and pushforward(G) is the rank-one
        algebra of the symmetric matrix Phi.
        """
        dims = self.power_dims(strict=False)
        square_dim = dims[1] if len(dims) > 1 else 0
        if square_dim > 1:
            raise StructureMatrixError(f"dim(A^2) = {square_dim} > 1")
        if not self.cube_is_zero():
            raise StructureMatrixError("A^3 != 0")
        n, p = self.n, self.p
        if square_dim == 0:
            return FpMatrix.zeros(n, n, p), FpMatrix.identity(n, p)
        products = self.structure.reshape(-1, n)
        spanning = products[np.flatnonzero(products.any(axis=1))[0]]
        # Complete the spanning vector to a basis with standard vectors.
        _, pivots = row_reduce(
            np.concatenate([spanning[None, :], np.eye(n, dtype=np.int64)]).T, p
        )
        complement = [np.eye(n, dtype=np.int64)[i - 1] for i in pivots[1:]]
        M = FpMatrix(np.stack(complement + [spanning], axis=1), p)
        G = M.inverse()
        transported = self.pushforward(G).structure
        return FpMatrix(transported[:, :, n - 1], p), G
