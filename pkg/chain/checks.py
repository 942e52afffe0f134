"""
Exhaustive checks of the alpha construction and of the stabilizer of tau(A)
for chain algebras.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from affine.subgroups import RegularSubgroupRep, build_subgroup
from fpcore.matrices import batch_inverse
from fpcore.orders import gl_order
from fpcore.vectors import all_vectors, vector_index
from oracle.budget import EnumerationBudget
from oracle.sweeps import stabilizer_mask, stabilizer_size

from .exceptions import ChainCheckFailed
from .maps import (
    ChainMaps,
    alpha_closed_form_n3,
    b_closed_form_n3,
    b_inverse_closed_form_n3,
    chain_maps,
    maps_for,
)
from .truncated import batch_mul

logger = logging.getLogger(__name__)


@dataclass
class ChainCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ChainReport:
    n: int
    p: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append(ChainCheck(name, bool(passed), detail))
        logger.debug("%s: %s %s", name, "pass" if passed else "FAIL", detail)

    def lines(self):
        for check in self.checks:
            line = f"{check.name}: {'pass' if check.passed else 'FAIL'}"
            if check.detail:
                line += f" ({check.detail})"
            yield line

    def as_dict(self):
        return {
            "n": self.n,
            "p": self.p,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def _first(mask, vectors):
    return tuple(vectors[int(np.flatnonzero(mask)[0])].tolist())


def alpha_checks(maps):
    """
    Check b, b^-1 and alpha over all of F_p^n. Failures are reported, not
    raised. Accepts a ChainMaps or a chain algebra.
    """
    if not isinstance(maps, ChainMaps):
        maps = maps_for(maps)
    n, p = maps.n, maps.p
    vectors = maps.vectors
    size = len(vectors)
    report = ChainReport(n, p)
    alpha = maps.alpha_table

    round_trip = maps.b_inverse_index[maps.b_index] != np.arange(size)
    report.add(
        "b^-1(b(r)) = r",
        not round_trip.any(),
        "" if not round_trip.any() else f"fails at r={_first(round_trip, vectors)}",
    )

    distinct = len(np.unique(alpha, axis=0))
    report.add("alpha injective", distinct == size, f"{distinct} of {size} distinct")

    rows_bijective = all(len(np.unique(row)) == size for row in alpha)
    base_point = len(np.unique(alpha[:, 0])) == size
    report.add(
        "regular on F_p^n",
        rows_bijective and base_point,
        "g -> alpha(g)(0) is a bijection" if base_point else "not transitive at 0",
    )

    # alpha(g) alpha(h) = alpha(g + h)
    closed = True
    for g in range(size):
        sums = vector_index(vectors[g] + vectors, p)
        if not np.array_equal(alpha[g][alpha], alpha[sums]):
            closed = False
            report.add("closure", False, f"fails at g={tuple(vectors[g].tolist())}")
            break
    if closed:
        report.add("closure", True)

    # b(r + r') = b(r) o b(r'), i.e. (1 + b(r))(1 + b(r')) = 1 + b(r + r').
    units = np.concatenate([np.ones((size, 1), dtype=np.int64), maps.b_table], axis=1)
    homomorphism = True
    for i in range(size):
        sums = vector_index(vectors[i] + vectors, p)
        product = batch_mul(units[i], units, p)[:, 1:]
        if not np.array_equal(product, maps.b_table[sums]):
            homomorphism = False
            report.add(
                "b is a homomorphism",
                False,
                f"fails at r={tuple(vectors[i].tolist())}",
            )
            break
    if homomorphism:
        report.add("b is a homomorphism", True)

    # The rule says g' = g + g * b(t).
    found = True
    rule = True
    for t in range(size):
        owners = conjugation_owners(maps, t)
        if owners is None:
            found = False
            report.add(
                "normalized by translations",
                False,
                f"a conjugate leaves alpha(G) at t={tuple(vectors[t].tolist())}",
            )
            break
        targets = vector_index(
            vectors
            + maps.algebra.multiply_many(
                vectors, np.broadcast_to(maps.b_table[t], vectors.shape)
            ),
            p,
        )
        rule &= np.array_equal(owners, targets)
    if found:
        report.add("normalized by translations", True)
        report.add("conjugation rule g' = g + g * b(t)", rule)

    if n == 3:
        closed_b = all(
            b_closed_form_n3(r, p) == tuple(maps.b_table[i].tolist())
            for i, r in enumerate(vectors)
        )
        report.add("n = 3 formula for b", closed_b)
        closed_inverse = all(
            b_inverse_closed_form_n3(s, p)
            == tuple(vectors[maps.b_inverse_index[i]].tolist())
            for i, s in enumerate(vectors)
        )
        report.add("n = 3 formula for b^-1", closed_inverse)
        report.add(
            "n = 3 formula for alpha",
            alpha_closed_form_mismatches(maps) == 0,
            "all p^6 pairs compared",
        )
    logger.info("alpha checks for %r: %s", maps, "pass" if report.passed else "FAIL")
    return report


def conjugation_owners(maps, t):
    """
    For translation index t, the index g' with
    lambda(t) alpha(g) lambda(t)^-1 = alpha(g') for every g, found by table
    lookup on the image of 0. None if some conjugate is not in alpha(G).
    """
    p = maps.p
    vectors = maps.vectors
    alpha = maps.alpha_table
    back = vector_index(vectors - vectors[t], p)
    conjugated = vector_index(vectors[alpha[:, back]] + vectors[t], p)
    owners = np.argsort(alpha[:, 0])[conjugated[:, 0]]
    if not np.array_equal(alpha[owners], conjugated):
        return None
    return owners


def alpha_closed_form_mismatches(maps):
    """Pairs (r, x) where the written-out n = 3 alpha differs from b^-1 lambda(r) b."""
    p = maps.p
    vectors = maps.vectors
    alpha = maps.alpha_table
    mismatches = 0
    for g, r in enumerate(vectors):
        for gamma, x in enumerate(vectors):
            expected = tuple(vectors[alpha[g, gamma]].tolist())
            mismatches += alpha_closed_form_n3(r, x, p) != expected
    return mismatches


def alpha_subgroup(maps):
    """
    alpha(G) as a RegularSubgroupRep when every alpha(g) is affine, else
    None. That happens for n <= 2, where A^3 = 0.
    """
    n, p = maps.n, maps.p
    vectors = maps.vectors
    alpha = maps.alpha_table
    origin = vectors[alpha[:, 0]]
    unit_index = vector_index(np.eye(n, dtype=np.int64), p)
    # Column j of the linear part is alpha(g)(e_j) - alpha(g)(0).
    linear = (vectors[alpha[:, unit_index]] - origin[:, None, :]).transpose(0, 2, 1) % p
    predicted = (np.einsum("gij,vj->gvi", linear, vectors) + origin[:, None, :]) % p
    if not np.array_equal(vector_index(predicted, p), alpha):
        return None
    by_translation = np.empty_like(linear)
    by_translation[vector_index(origin, p)] = linear
    return RegularSubgroupRep(by_translation, p)


def chain_automorphisms(n, p):
    """
    Matrices of the algebra automorphisms z -> a_1 z + ... + a_n z^n with
    a_1 != 0; column j is the image of z^(j+1).
    """
    coefficients = all_vectors(n, p)
    coefficients = coefficients[coefficients[:, 0] != 0]
    w = np.concatenate(
        [np.zeros((len(coefficients), 1), dtype=np.int64), coefficients], axis=1
    )
    columns = []
    power = w
    for _ in range(n):
        columns.append(power[:, 1:])
        power = batch_mul(power, w, p)
    return np.stack(columns, axis=2)


def chain_stabilizer_check(n, p, budget=None, sample=None):
    """
    (expected, observed) orders of the stabilizer of tau(A) in GL_n(F_p) for
    the chain algebra A; expected is p^(n-1)(p-1) = |Aut(A)|.

    With sample=None the whole of GL_n is swept. With a sample size, the
    explicit automorphisms are checked and `sample` random invertible
    matrices are tested; a sampled stabilizer element that is not an
    automorphism fails the check.
    """
    budget = budget if budget is not None else EnumerationBudget.from_settings()
    maps = chain_maps(n, p)
    subgroup = build_subgroup(maps.algebra)
    expected = p ** (n - 1) * (p - 1)
    if sample is None:
        budget.require(
            gl_order(n, p), f"a sweep of GL_{n}(F_{p})", hint="use sampling mode"
        )
        observed = stabilizer_size(subgroup, budget)
    else:
        automorphisms = chain_automorphisms(n, p)
        observed = int(stabilizer_mask(subgroup.linear, automorphisms, p).sum())
        known = {m.tobytes() for m in automorphisms}
        rng = np.random.default_rng(budget.seed)
        candidates = rng.integers(0, p, size=(sample, n, n))
        _, invertible = batch_inverse(candidates, p)
        candidates = candidates[invertible]
        hits = candidates[stabilizer_mask(subgroup.linear, candidates, p)]
        strays = [m for m in hits if m.tobytes() not in known]
        logger.info(
            "sampled %d invertible matrices, %d stabilize tau(A)",
            len(candidates),
            len(hits),
        )
        if strays:
            raise ChainCheckFailed(
                f"{strays[0].tolist()} stabilizes tau(A) but is not an automorphism"
            )
    if observed != expected:
        raise ChainCheckFailed(
            f"the chain algebra subgroup has stabilizer order {observed}, "
            f"expected {expected}"
        )
    return expected, observed
