"""
Sta(T) for T = tau(A), A the rank-one algebra of a normal form D.

Sta(T) is Aut(A): the P with (Pu)^T D (Pv) e_n = (u^T D v) P e_n. Split into
blocks of sizes (k, n-1-k, 1), P is block lower triangular with
P33 = q != 0 and P11^T D_s P11 = q D_s; P21, P22, P31, P32 are otherwise
free (P22 invertible).
"""

import numpy as np

from fpcore.exceptions import NotInvertible
from fpcore.orders import CASE_ODD, gl_order, go_order


def blocks(fc):
    k, n = fc.k, fc.n
    return slice(0, k), slice(k, n - 1), slice(n - 1, n)


def stabilizer_membership(fc, P):
    """True iff conjugation by (P, 0) fixes the subgroup of the normal form."""
    if not P.is_invertible():
        raise NotInvertible("stabilizer membership needs an invertible matrix")
    if fc.k == 0:
        return True
    p = fc.p
    first, middle, last = blocks(fc)
    entries = P.entries
    if entries[first, middle].any() or entries[first, last].any():
        return False
    if entries[middle, last].any():
        return False
    q = int(entries[-1, -1])
    P11 = entries[first, first]
    D = fc.active_form.entries
    return np.array_equal(P11.T @ D @ P11 % p, q * D % p)


def multiplier_choices(fc):
    """Admissible q: squares for odd rank, every unit for even rank."""
    if fc.case_label == CASE_ODD:
        return (fc.p - 1) // 2
    return fc.p - 1


def stabilizer_block_choices(fc):
    """
    Number of choices for each block of a stabilizer element, laid out as the
    block matrix itself. The product of all entries is stabilizer_order(fc).
    """
    n, p, k = fc.n, fc.p, fc.k
    if k == 0:
        return [[gl_order(n, p)]]
    rest = n - 1 - k
    return [
        [go_order(k, p, fc.case_label), 1, 1],
        [p ** (k * rest), gl_order(rest, p), 1],
        [p**k, p**rest, multiplier_choices(fc)],
    ]


def stabilizer_order(fc):
    n, p, k = fc.n, fc.p, fc.k
    if k == 0:
        return gl_order(n, p)
    rest = n - 1 - k
    return (
        multiplier_choices(fc)
        * go_order(k, p, fc.case_label)
        * gl_order(rest, p)
        * p ** (k * rest + n - 1)
    )
