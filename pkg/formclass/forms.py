"""
Normal forms of the symmetric structure matrix Phi of an algebra with
dim A^2 = 1 and A^3 = 0.

Phi is reduced by congruence P Phi P^T with P = diag(P_{n-1}, 1), and by
rescaling the vector spanning A^2, to

    D = diag(1, ..., 1, s, 0, ..., 0)

with k nonzero entries and s either 1 or the canonical non-square.
"""

import logging
from dataclasses import dataclass

import numpy as np

from fpcore.field import (
    canonical_nonsquare,
    check_prime,
    inverse_mod,
    legendre_is_square,
    sqrt_mod,
    sum_of_two_squares,
)
from fpcore.matrices import FpMatrix
from fpcore.orders import CASE_ODD, form_type
from nilalg.families import check_structure_matrix, rank1_algebra

from .exceptions import FormError, NoScalingExists

logger = logging.getLogger(__name__)


def normal_form_matrix(n, k, s, p):
    diagonal = [1] * k + [0] * (n - k)
    if k:
        diagonal[k - 1] = s
    return FpMatrix.diagonal(diagonal, p)


@dataclass(frozen=True)
class FormClass:
    n: int
    p: int
    k: int
    s: int
    change_of_basis: FpMatrix
    scale: int = 1

    def __post_init__(self):
        if not 0 <= self.k <= self.n - 1:
            raise FormError(f"rank k={self.k} must lie in [0, {self.n - 1}]")
        if self.k and self.s not in (1, canonical_nonsquare(self.p)):
            raise FormError(
                f"s must be 1 or {canonical_nonsquare(self.p)}, not {self.s}"
            )
        if self.k % 2 and self.s != 1:
            raise FormError("odd rank normal forms have s = 1")

    @property
    def case_label(self):
        return form_type(self.k, self.s, self.p)

    @property
    def normal_form(self):
        return normal_form_matrix(self.n, self.k, self.s, self.p)

    @property
    def active_form(self):
        """D_s, the k x k nonzero block of the normal form."""
        return normal_form_matrix(self.k, self.k, self.s, self.p)

    def algebra(self):
        return rank1_algebra(self.normal_form)

    def algebra_isomorphism(self):
        """
        G in GL_n with pushforward(rank1_algebra(Phi), G) equal to the
        normal-form algebra: the transpose inverse of P on the first n - 1
        coordinates and `scale` on the last.
        """
        G = self.change_of_basis.inverse().T.entries.copy()
        G[-1, -1] = self.scale
        return FpMatrix(G, self.p)

    def transport(self, P):
        """An automorphism of the normal form seen in the original coordinates."""
        G = self.algebra_isomorphism()
        return G.inverse() @ P @ G

    def as_dict(self):
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "case": self.case_label,
            "scale": self.scale,
            "change_of_basis": self.change_of_basis.to_list(),
            "normal_form": self.normal_form.to_list(),
        }


def normal_form_class(n, k, s, p):
    """The FormClass of a matrix already in normal form."""
    return FormClass(n=n, p=p, k=k, s=s, change_of_basis=FpMatrix.identity(n, p))


class _Congruence:
    """
    The leading block M together with the accumulated P, kept so that
    P M_0 P^T = M after every elementary operation.
    """

    def __init__(self, block, p):
        self.p = p
        self.M = block.copy()
        self.P = np.eye(len(block), dtype=np.int64)

    def apply(self, E):
        self.M = E @ self.M % self.p @ E.T % self.p
        self.P = E @ self.P % self.p

    def elementary(self):
        return np.eye(len(self.M), dtype=np.int64)

    def swap(self, i, j):
        if i != j:
            E = self.elementary()
            E[[i, j]] = E[[j, i]]
            self.apply(E)

    def add_row(self, target, source, factor):
        E = self.elementary()
        E[target, source] = factor % self.p
        self.apply(E)

    def scale_row(self, i, factor):
        E = self.elementary()
        E[i, i] = factor % self.p
        self.apply(E)

    def rotate(self, i, j, f, g):
        E = self.elementary()
        E[i, i], E[i, j], E[j, i], E[j, j] = f, g, -g % self.p, f
        self.apply(E)


def diagonalize_congruence(phi):
    """
    Classify a symmetric structure matrix with zero last row and column.

    The leading (n-1) x (n-1) block is diagonalised by symmetric row and
    column operations, each d_i is rescaled to 1 or the non-square, and pairs
    of non-squares are turned into pairs of ones, leaving at most one
    non-square in slot k - 1. Odd rank forms with a non-square discriminant
    are first multiplied by the non-square through `scale`.
    """
    check_prime(phi.p)
    check_structure_matrix(phi)
    p, n = phi.p, phi.rows
    nonsquare = canonical_nonsquare(p)
    work = _Congruence(phi.entries[: n - 1, : n - 1], p)
    m = n - 1
    k = 0
    for j in range(m):
        rest = work.M[j:, j:]
        if not rest.any():
            break
        diagonal = np.flatnonzero(rest.diagonal())
        if diagonal.size:
            work.swap(j, j + diagonal[0])
        else:
            a, b = np.argwhere(rest)[0] + j
            # r_a += r_b leaves 2 M[a, b] on the diagonal.
            work.add_row(a, b, 1)
            work.swap(j, a)
        pivot_inverse = inverse_mod(int(work.M[j, j]), p)
        for i in range(j + 1, m):
            if work.M[i, j]:
                work.add_row(i, j, -int(work.M[i, j]) * pivot_inverse)
        k += 1

    diagonal = [int(d) for d in work.M.diagonal()[:k]]
    scale = 1
    discriminant = 1
    for d in diagonal:
        discriminant = discriminant * d % p
    if k % 2 and not legendre_is_square(discriminant, p):
        scale = nonsquare
        diagonal = [d * scale % p for d in diagonal]

    for i, d in enumerate(diagonal):
        root = sqrt_mod(d, p)
        target = 1
        if root is None:
            root = sqrt_mod(d * inverse_mod(nonsquare, p), p)
            target = nonsquare
        work.scale_row(i, inverse_mod(root, p))
        diagonal[i] = target

    # s * (f^2 + g^2) = 1 turns diag(s, s) into diag(1, 1).
    nonsquares = [i for i, d in enumerate(diagonal) if d != 1]
    if len(nonsquares) > 1:
        f, g = sum_of_two_squares(inverse_mod(nonsquare, p), p)
        while len(nonsquares) > 1:
            i, j = nonsquares.pop(), nonsquares.pop()
            work.rotate(i, j, f, g)
            diagonal[i] = diagonal[j] = 1
    s = 1
    if nonsquares:
        work.swap(nonsquares[0], k - 1)
        s = nonsquare

    P = np.eye(n, dtype=np.int64)
    P[: n - 1, : n - 1] = work.P
    fc = FormClass(n=n, p=p, k=k, s=s, change_of_basis=FpMatrix(P, p), scale=scale)
    reduced = (fc.change_of_basis @ phi @ fc.change_of_basis.T).scale(scale)
    if reduced != fc.normal_form:
        raise FormError(f"congruence check failed for {phi!r}")
    logger.debug("classified %r as k=%d s=%d (%s)", phi, k, s, fc.case_label)
    return fc


def classify_algebra(algebra):
    """FormClass of an algebra with dim A^2 <= 1 and A^3 = 0, in any basis."""
    phi, G = algebra.square_line()
    fc = diagonalize_congruence(phi)
    return fc, G


def scaling_matrix(k, s, q, p):
    """
    C with C^T D_s C = q D_s for the k x k form D_s = diag(1, ..., 1, s).
    """
    check_prime(p)
    q %= p
    if q == 0:
        raise FormError("q must be nonzero")
    if k < 1:
        raise FormError(f"k must be positive, not {k}")
    nonsquare = canonical_nonsquare(p)
    s %= p
    if s not in (1, nonsquare):
        raise FormError(f"s must be 1 or {nonsquare}, not {s}")
    if form_type(k, s, p) == CASE_ODD:
        if s != 1:
            raise FormError("odd rank normal forms have s = 1")
        t = sqrt_mod(q, p)
        if t is None:
            raise NoScalingExists(f"no scaling exists: {q} is not a square mod {p}")
        return FpMatrix.identity(k, p).scale(t)
    f, g = sum_of_two_squares(q, p)
    Q = [[f, g], [-g, f]]
    if s == 1:
        return FpMatrix.block_diagonal([Q] * (k // 2), p)
    if legendre_is_square(q, p):
        w, x = sqrt_mod(q, p), 0
    else:
        w, x = 0, sqrt_mod(q * inverse_mod(s, p), p)
    R = [[w, s * x], [x, -w]]
    return FpMatrix.block_diagonal([Q] * (k // 2 - 1) + [R], p)

