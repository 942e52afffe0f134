"""
Descent data for the Hopf algebra attached to a regular subgroup.

For A^3 = 0, conjugating tau(x) by the translation lambda(z) gives
tau(x - x * z). The descended algebra is spanned by the sums
sum_x b_x tau(x) whose coefficients satisfy b_{x - x*z} = b_x^z, and tau(x)
acts on the dual basis through the exponent -x + x^2, the circle inverse of
x. For chain algebras the same data is read off the alpha embedding.

Everything is stored as tables of vector indices in the all_vectors order.
"""

import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from chain.checks import conjugation_owners
from chain.exceptions import ChainCheckFailed
from chain.maps import maps_for
from fpcore.vectors import all_vectors, as_vector, vector_index

from .exceptions import DescentError, DescentUnavailable

logger = logging.getLogger(__name__)

TABLE_KEYS = ("conjugation_table", "basis_action", "action_exponent", "evaluation")

SOURCE_CUBE_ZERO = "cube-zero"
SOURCE_CHAIN = "chain"

SOURCE_CHOICES = [
    (SOURCE_CUBE_ZERO, "A^3 = 0: tau(A) is normalized by the translations"),
    (SOURCE_CHAIN, "chain algebra, through alpha(G) in Perm(F_p^n)"),
]

COEFFICIENT_CONSTRAINT = "b_{x - x*z} = b_x^z"
CHAIN_COEFFICIENT_CONSTRAINT = (
    "b_{g'} = b_g^t where lambda(t) alpha(g) lambda(t)^-1 = alpha(g')"
)


@dataclass
class DescentDatum:
    p: int
    n: int
    source: str
    conjugation_table: np.ndarray
    basis_action: np.ndarray
    coefficient_constraint: str
    action_exponent: np.ndarray = None
    evaluation: np.ndarray = None

    def __repr__(self):
        return f"<DescentDatum {self.source} n={self.n} p={self.p}>"

    @property
    def vectors(self):
        return all_vectors(self.n, self.p)

    def conjugate(self, x, z):
        """The index-free form of conjugation_table[x, z]."""
        i = int(vector_index(np.array(as_vector(x, self.p, self.n)), self.p))
        j = int(vector_index(np.array(as_vector(z, self.p, self.n)), self.p))
        return tuple(int(v) for v in self.vectors[self.conjugation_table[i, j]])

    def exponent(self, x):
        if self.action_exponent is None:
            raise DescentError("chain data has no exponent map; use evaluation")
        i = int(vector_index(np.array(as_vector(x, self.p, self.n)), self.p))
        return tuple(int(v) for v in self.vectors[self.action_exponent[i]])

    def rows_are_permutations(self):
        """For each fixed z, whether x -> conjugation_table[x, z] is a bijection."""
        size = len(self.conjugation_table)
        return all(
            len(np.unique(self.conjugation_table[:, j])) == size for j in range(size)
        )


def _check_size(n, p):
    size = p**n
    if size * size > settings.HOPF_EXHAUSTIVE_LIMIT:
        raise DescentError(
            f"descent tables for p^n = {size} exceed HOPF_EXHAUSTIVE_LIMIT"
        )


def descent_datum(algebra):
    if not algebra.cube_is_zero():
        raise DescentUnavailable(
            "A^3 != 0: tau(A) is not normalized by the translations; "
            "use chain_descent_datum"
        )
    n, p = algebra.n, algebra.p
    _check_size(n, p)
    vectors = all_vectors(n, p)
    size = len(vectors)
    conjugation = np.empty((size, size), dtype=np.int64)
    for j, z in enumerate(vectors):
        products = algebra.multiply_many(vectors, np.broadcast_to(z, vectors.shape))
        conjugation[:, j] = vector_index(vectors - products, p)
    squares = algebra.multiply_many(vectors, vectors)
    datum = DescentDatum(
        p=p,
        n=n,
        source=SOURCE_CUBE_ZERO,
        conjugation_table=conjugation,
        basis_action=algebra.circle_table(),
        coefficient_constraint=COEFFICIENT_CONSTRAINT,
        action_exponent=vector_index(squares - vectors, p),
    )
    logger.info("built %r", datum)
    return datum


def chain_descent_datum(algebra):
    """
    Descent data for a chain algebra with p > n: conjugation by lookup in the
    alpha table, and the evaluation map g -> b^-1(g^-1) with the circle
    inverse.
    """
    maps = maps_for(algebra)
    n, p = maps.n, maps.p
    _check_size(n, p)
    size = len(maps.vectors)
    conjugation = np.empty((size, size), dtype=np.int64)
    for t in range(size):
        owners = conjugation_owners(maps, t)
        if owners is None:
            raise ChainCheckFailed(
                f"alpha(G) is not normalized by lambda({maps.vectors[t].tolist()})"
            )
        conjugation[:, t] = owners
    inverses = vector_index(maps.algebra.circle_inv_many(maps.vectors), p)
    datum = DescentDatum(
        p=p,
        n=n,
        source=SOURCE_CHAIN,
        conjugation_table=conjugation,
        basis_action=np.array(maps.alpha_table),
        coefficient_constraint=CHAIN_COEFFICIENT_CONSTRAINT,
        evaluation=maps.b_inverse_index[inverses],
    )
    logger.info("built %r", datum)
    return datum


def rank_one_conjugation(phi, r, t):
    """r - (r^T Phi t) e_n; for Phi = diag(d) the scalar is sum r_i t_i d_i."""
    p = phi.p
    r = np.array(as_vector(r, p, phi.rows), dtype=np.int64)
    t = np.array(as_vector(t, p, phi.rows), dtype=np.int64)
    result = r.copy()
    result[-1] -= r @ phi.entries @ t
    return tuple(int(v) for v in result % p)


def annihilator(algebra):
    """Indices of the x with x * z = 0 for every z."""
    matrices = algebra.left_mul_matrices(all_vectors(algebra.n, algebra.p))
    return np.flatnonzero(~matrices.reshape(len(matrices), -1).any(axis=1))


def fixed_points(datum):
    """Indices fixed by every conjugation."""
    table = datum.conjugation_table
    return np.flatnonzero((table == np.arange(len(table))[:, None]).all(axis=1))


def to_document(datum):
    doc = {
        "p": datum.p,
        "n": datum.n,
        "source": datum.source,
        "coefficient_constraint": datum.coefficient_constraint,
        "vectors": datum.vectors.tolist(),
        "conjugation_table": datum.conjugation_table.tolist(),
        "basis_action": datum.basis_action.tolist(),
    }
    if datum.action_exponent is not None:
        doc["action_exponent"] = datum.action_exponent.tolist()
    if datum.evaluation is not None:
        doc["evaluation"] = datum.evaluation.tolist()
    return doc


def from_document(doc):
    try:
        p, n, source = doc["p"], doc["n"], doc["source"]
        tables = {
            key: np.array(doc[key], dtype=np.int64)
            for key in TABLE_KEYS
            if doc.get(key) is not None
        }
        constraint = doc["coefficient_constraint"]
    except (KeyError, TypeError, ValueError) as e:
        raise DescentError(f"malformed descent document: {e}") from e
    if source not in dict(SOURCE_CHOICES):
        raise DescentError(f"unknown source {source!r}")
    for key in ("conjugation_table", "basis_action"):
        if key not in tables:
            raise DescentError(f"malformed descent document: missing {key}")
    size = p**n
    for key, table in tables.items():
        expected = (size,) if key in ("action_exponent", "evaluation") else (size, size)
        if table.shape != expected:
            raise DescentError(f"{key} has shape {table.shape}, expected {expected}")
        if table.size and (table.min() < 0 or table.max() >= size):
            raise DescentError(f"{key} holds an index outside range({size})")
    return DescentDatum(
        p=p,
        n=n,
        source=source,
        conjugation_table=tables["conjugation_table"],
        basis_action=tables["basis_action"],
        coefficient_constraint=constraint,
        action_exponent=tables.get("action_exponent"),
        evaluation=tables.get("evaluation"),
    )
