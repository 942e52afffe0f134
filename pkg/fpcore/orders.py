"""
Orders of the linear and orthogonal groups that the counting formulas use.
"""

from .exceptions import FieldError
from .field import legendre_is_square

CASE_ZERO = "zero"
CASE_ODD = "odd"
CASE_EVEN_PLUS = "even-plus"
CASE_EVEN_MINUS = "even-minus"

CASE_CHOICES = [
    (CASE_ZERO, "A^2 = 0 (classical structure)"),
    (CASE_ODD, "odd rank"),
    (CASE_EVEN_PLUS, "even rank, plus type"),
    (CASE_EVEN_MINUS, "even rank, minus type"),
]


def gl_order(n, p):
    order = 1
    for i in range(n):
        order *= p**n - p**i
    return order


def form_type(k, s, p):
    """
    Orthogonal type of D_s = diag(1, ..., 1, s) of size k.

    For k = 2m the form is of plus type iff its discriminant times (-1)^m
    is a square.
    """
    if k == 0:
        return CASE_ZERO
    if k % 2:
        return CASE_ODD
    m = k // 2
    if legendre_is_square((-1) ** m * s, p):
        return CASE_EVEN_PLUS
    return CASE_EVEN_MINUS


def go_order(k, p, case_label):
    if k < 1:
        raise FieldError(f"orthogonal groups need k >= 1, not {k}")
    m = k // 2
    if k % 2:
        if case_label != CASE_ODD:
            raise FieldError(f"k={k} is odd but the case is {case_label!r}")
        order = 2 * p ** (m * m)
        for i in range(1, m + 1):
            order *= p ** (2 * i) - 1
        return order
    if case_label == CASE_EVEN_PLUS:
        sign = -1
    elif case_label == CASE_EVEN_MINUS:
        sign = 1
    else:
        raise FieldError(f"k={k} is even but the case is {case_label!r}")
    order = 2 * p ** (m * (m - 1)) * (p**m + sign)
    for i in range(1, m):
        order *= p ** (2 * i) - 1
    return order


def go_order_degree(k):
    """Degree of go_order(k, p, ...) as a polynomial in p: dim O_k = k(k-1)/2."""
    return k * (k - 1) // 2
