"""
Brute-force ground truth: stabilizers and conjugation orbits of regular
subgroups under GL_n(F_p), orthogonal group orders, form equivalence and the
number of algebra structures on F_p^n.

Everything here works from raw tables (the linear parts of a subgroup, the
entries of a form) and never from the closed-form theory it is checking.
"""

import logging
from dataclasses import dataclass

import numpy as np

from affine.subgroups import key_header
from fpcore.matrices import FpMatrix, batch_inverse
from fpcore.orders import gl_order
from fpcore.vectors import all_vectors, vector_index
from nilalg.families import check_structure_matrix

from .budget import EnumerationBudget
from .enumeration import iter_general_linear, run_sweep
from .exceptions import OracleError

logger = logging.getLogger(__name__)

ORBIT_ENUMERATE = "enumerate"
ORBIT_STABILIZER = "stabilizer"
ORBIT_AUTO = "auto"

# Matrices times subgroup elements per vectorised full membership check.
FULL_CHECK_ELEMENTS = 2**16


def _budget(budget):
    return budget if budget is not None else EnumerationBudget.from_settings()


def stabilizer_mask(linear, Ps, p):
    """
    For each P in the stack, whether conjugation by (P, 0) maps the subgroup
    with linear parts `linear` to itself, i.e. P B_y = B_{Py} P for every y.

    The images of tau(e_i) are checked first; only the survivors get the
    check over all p^n elements.
    """
    n = linear.shape[1]
    vectors = all_vectors(n, p)
    unit_index = vector_index(np.eye(n, dtype=np.int64), p)
    mask = np.ones(len(Ps), dtype=bool)
    for i in range(n):
        images = vector_index(Ps[:, :, i], p)
        lhs = np.matmul(Ps, linear[unit_index[i]]) % p
        rhs = np.matmul(linear[images], Ps) % p
        mask &= (lhs == rhs).all(axis=(1, 2))
    survivors = np.flatnonzero(mask)
    step = max(1, FULL_CHECK_ELEMENTS // len(vectors))
    for start in range(0, len(survivors), step):
        chosen = survivors[start : start + step]
        P = Ps[chosen]
        images = vector_index(np.einsum("sij,vj->svi", P, vectors) % p, p)
        lhs = np.matmul(P[:, None], linear[None]) % p
        rhs = np.matmul(linear[images], P[:, None]) % p
        mask[chosen] = (lhs == rhs).all(axis=(1, 2, 3))
    return mask


def _stabilizer_task(task):
    linear, p, worker, workers, batch, collect = task
    n = linear.shape[1]
    count = 0
    found = []
    for Ps in iter_general_linear(n, p, worker, workers, batch):
        mask = stabilizer_mask(linear, Ps, p)
        count += int(mask.sum())
        if collect:
            found.append(Ps[mask])
    return count, found


def _stabilizer_sweep(subgroup, budget, collect):
    budget = _budget(budget)
    n, p = subgroup.n, subgroup.p
    budget.require(gl_order(n, p), f"a sweep of GL_{n}(F_{p})")
    tasks = [
        (subgroup.linear, p, w, budget.workers, budget.batch, collect)
        for w in range(budget.workers)
    ]
    results = run_sweep(_stabilizer_task, tasks, budget.workers)
    count = sum(c for c, _ in results)
    logger.info("stabilizer of %r in GL_%d(F_%d): %d", subgroup, n, p, count)
    return count, [stack for _, stacks in results for stack in stacks]


def stabilizer_size(subgroup, budget=None):
    return _stabilizer_sweep(subgroup, budget, collect=False)[0]


def stabilizer_elements(subgroup, budget=None):
    """The stabilizer itself as a (S, n, n) array, sorted lexicographically."""
    n = subgroup.n
    _, stacks = _stabilizer_sweep(subgroup, budget, collect=True)
    if not stacks:
        return np.zeros((0, n, n), dtype=np.int64)
    elements = np.concatenate(stacks)
    order = np.lexsort(elements.reshape(len(elements), -1).T[::-1])
    return elements[order]


def conjugate_linear_parts(linear, Ps, p):
    """(B, p^n, n, n) linear parts of (P, 0) T (P, 0)^-1, in translation order."""
    n = linear.shape[1]
    inverses, _ = batch_inverse(Ps, p)
    vectors = all_vectors(n, p)
    sources = vector_index(np.einsum("bij,vj->bvi", inverses, vectors) % p, p)
    conjugated = np.matmul(Ps[:, None], linear[sources]) % p
    return np.matmul(conjugated, inverses[:, None]) % p


def _orbit_task(task):
    linear, p, worker, workers, batch = task
    n = linear.shape[1]
    header = key_header(p, n)
    own_key = header + linear.astype(np.uint16).tobytes()
    step = max(1, batch // len(linear))
    keys = set()
    fixed = 0
    for Ps in iter_general_linear(n, p, worker, workers, batch):
        for start in range(0, len(Ps), step):
            conjugates = conjugate_linear_parts(linear, Ps[start : start + step], p)
            for table in conjugates.astype(np.uint16):
                key = header + table.tobytes()
                keys.add(key)
                fixed += key == own_key
    return keys, fixed


@dataclass
class OrbitResult:
    size: int
    stabilizer: int
    method: str


def orbit(subgroup, budget=None, method=ORBIT_AUTO):
    """
    Size of the GL_n(F_p) conjugation orbit of a regular subgroup, with the
    stabilizer order found along the way.

    `enumerate` collects every conjugate's canonical key; `stabilizer`
    counts Sta(T) and divides. `auto` enumerates for n <= 3.
    """
    budget = _budget(budget)
    n, p = subgroup.n, subgroup.p
    order = gl_order(n, p)
    if method == ORBIT_AUTO:
        method = ORBIT_ENUMERATE if n <= 3 else ORBIT_STABILIZER
    if method == ORBIT_STABILIZER:
        stabilizer = stabilizer_size(subgroup, budget)
        return OrbitResult(order // stabilizer, stabilizer, method)
    budget.require(
        order,
        f"enumerating the orbit under GL_{n}(F_{p})",
        hint="use the stabilizer method for orbit-stabilizer counting",
    )
    tasks = [
        (subgroup.linear, p, w, budget.workers, budget.batch)
        for w in range(budget.workers)
    ]
    keys = set()
    stabilizer = 0
    for worker_keys, fixed in run_sweep(_orbit_task, tasks, budget.workers):
        keys |= worker_keys
        stabilizer += fixed
    if len(keys) * stabilizer != order:
        raise OracleError(
            f"orbit {len(keys)} times stabilizer {stabilizer} is not |GL_{n}| = {order}"
        )
    logger.info("orbit of %r: %d conjugates", subgroup, len(keys))
    return OrbitResult(len(keys), stabilizer, method)


def orbit_size(subgroup, budget=None, method=ORBIT_AUTO):
    return orbit(subgroup, budget, method).size


def orthogonal_count(k, p, s, budget=None):
    """
    |{U : U^T D_s U = D_s}| for D_s = diag(1, ..., 1, s) of size k, built
    column by column: column j must have norm D_jj and be orthogonal to the
    columns before it.
    """
    budget = _budget(budget)
    diagonal = [1] * k
    diagonal[-1] = s % p
    D = np.diag(np.array(diagonal, dtype=np.int64))
    vectors = all_vectors(k, p)
    norms = np.einsum("vi,ij,vj->v", vectors, D, vectors) % p
    frontier = np.zeros((1, k, 0), dtype=np.int64)
    for j in range(k):
        budget.require(
            len(frontier) * len(vectors), f"orthogonal search at column {j} of GO_{k}"
        )
        products = np.einsum("bij,ik,vk->bjv", frontier, D, vectors) % p
        allowed = (products == 0).all(axis=1) & (norms == diagonal[j])[None, :]
        owners, columns = np.nonzero(allowed)
        frontier = np.concatenate(
            [frontier[owners], vectors[columns][:, :, None]], axis=2
        )
        logger.debug(
            "GO_%d(F_%d) column %d: %d partial matrices", k, p, j, len(frontier)
        )
    return len(frontier)


def form_equivalence_search(phi1, phi2, p, budget=None):
    """
    Some diag(P, 1) with P Phi1 P^T = Phi2, searching GL_{n-1}(F_p) in its
    enumeration order, or None when the forms are not congruent.
    """
    budget = _budget(budget)
    check_structure_matrix(phi1)
    check_structure_matrix(phi2)
    n = phi1.rows
    m = n - 1
    target = phi2.entries[:m, :m]
    source = phi1.entries[:m, :m]
    if phi1 == phi2:
        return FpMatrix.identity(n, p)
    if phi1.rank() != phi2.rank():
        return None
    budget.require(gl_order(m, p), f"a sweep of GL_{m}(F_{p})")
    for Ps in iter_general_linear(m, p, batch=budget.batch):
        images = np.matmul(np.matmul(Ps, source) % p, Ps.transpose(0, 2, 1)) % p
        hits = np.flatnonzero((images == target).all(axis=(1, 2)))
        if hits.size:
            P = np.eye(n, dtype=np.int64)
            P[:m, :m] = Ps[hits[0]]
            return FpMatrix(P, p)
    return None


@dataclass
class StructureCount:
    n: int
    p: int
    candidates: int
    nilpotent: int
    cube_zero: int


def count_algebra_structures(n, p, budget=None):
    """
    Count the commutative, associative, nilpotent structure tensors on
    F_p^n (and how many have A^3 = 0) by running through all commutative
    tensors.
    """
    budget = _budget(budget)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    candidates = p ** (n * len(pairs))
    budget.require(candidates, f"all commutative tensors on F_{p}^{n}")
    nilpotent = cube_zero = 0
    columns = all_vectors(n * len(pairs), p)
    step = max(1, budget.batch // max(1, n**4))
    for start in range(0, len(columns), step):
        block = columns[start : start + step].reshape(-1, len(pairs), n)
        c = np.zeros((len(block), n, n, n), dtype=np.int64)
        for index, (i, j) in enumerate(pairs):
            c[:, i, j] = c[:, j, i] = block[:, index]
        left = np.einsum("bijl,blkm->bijkm", c, c) % p
        right = np.einsum("bjkl,bilm->bijkm", c, c) % p
        associative = (left == right).all(axis=(1, 2, 3, 4))
        # Products of n + 1 basis vectors; zero iff the algebra is nilpotent.
        power = np.broadcast_to(np.eye(n, dtype=np.int64), (len(block), n, n))
        for _ in range(n):
            power = np.einsum("b...l,blkm->b...km", power, c) % p
        nil = associative & ~power.reshape(len(block), -1).any(axis=1)
        nilpotent += int(nil.sum())
        cube_zero += int((nil & ~left.reshape(len(block), -1).any(axis=1)).sum())
    logger.info(
        "F_%d^%d: %d nilpotent structures, %d with A^3 = 0", p, n, nilpotent, cube_zero
    )
    return StructureCount(n, p, candidates, nilpotent, cube_zero)
