"""
Polynomials in F_p[z]/z^(n+1) and the group of principal units 1 + zF_p[z].

Batched helpers work on (B, n + 1) coefficient arrays, constant term first.
"""

from dataclasses import dataclass

import numpy as np

from fpcore.field import FpScalar, check_prime, inverse_mod

from .exceptions import ChainError, PrimeTooSmall


def batch_mul(a, b, p):
    """Row-wise truncated products of two (B, n + 1) coefficient arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    size = a.shape[-1]
    product = np.zeros(a.shape, dtype=np.int64)
    for k in range(size):
        product[..., k] = (a[..., : k + 1] * b[..., k::-1]).sum(axis=-1) % p
    return product


def batch_log(units, p):
    """log(1 + w) = w - w^2/2 + w^3/3 - ... for each row, with w = u - 1."""
    units = np.asarray(units, dtype=np.int64) % p
    n = units.shape[-1] - 1
    if p <= n:
        raise PrimeTooSmall(f"the logarithm requires p > n (p={p}, n={n})")
    if (units[..., 0] != 1).any():
        raise ChainError("the logarithm is only defined on principal units")
    w = units.copy()
    w[..., 0] = 0
    result = np.zeros_like(w)
    power = w
    for i in range(1, n + 1):
        coefficient = inverse_mod(i, p) * (1 if i % 2 else -1)
        result = (result + coefficient * power) % p
        power = batch_mul(power, w, p)
    return result


@dataclass(frozen=True)
class TruncatedPoly:
    coefficients: tuple
    p: int

    def __post_init__(self):
        check_prime(self.p)
        coefficients = tuple(int(c) % self.p for c in self.coefficients)
        if not coefficients:
            raise ChainError("a truncated polynomial needs at least a constant term")
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def one(cls, n, p):
        return cls((1,) + (0,) * n, p)

    @classmethod
    def monomial(cls, i, n, p, c=1):
        coefficients = [0] * (n + 1)
        if i <= n:
            coefficients[i] = c
        return cls(coefficients, p)

    @classmethod
    def unit(cls, x, p):
        """1 + x_1 z + ... + x_n z^n for an element x of the chain algebra."""
        return cls((1,) + tuple(x), p)

    @property
    def n(self):
        return len(self.coefficients) - 1

    @property
    def scalars(self):
        return tuple(FpScalar(c, self.p) for c in self.coefficients)

    @property
    def tail(self):
        """Coefficients of z, ..., z^n."""
        return self.coefficients[1:]

    def is_principal_unit(self):
        return self.coefficients[0] == 1

    def _check(self, other):
        if (self.n, self.p) != (other.n, other.p):
            raise ChainError(
                f"cannot combine F_{self.p}[z]/z^{self.n + 1} "
                f"and F_{other.p}[z]/z^{other.n + 1}"
            )

    def __add__(self, other):
        self._check(other)
        return TruncatedPoly(
            [a + b for a, b in zip(self.coefficients, other.coefficients)], self.p
        )

    def __sub__(self, other):
        self._check(other)
        return TruncatedPoly(
            [a - b for a, b in zip(self.coefficients, other.coefficients)], self.p
        )

    def __mul__(self, other):
        self._check(other)
        return TruncatedPoly(
            batch_mul(self.coefficients, other.coefficients, self.p).tolist(), self.p
        )

    def scale(self, c):
        return TruncatedPoly([c * a for a in self.coefficients], self.p)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if c:
                terms.append(str(c) if i == 0 else f"{c}z^{i}" if c != 1 else f"z^{i}")
        return " + ".join(terms) or "0"


def _require_unit(u):
    if not u.is_principal_unit():
        raise ChainError(f"{u} is not a principal unit")


def unit_mul(u, v):
    _require_unit(u)
    _require_unit(v)
    return u * v


def unit_pow(u, e):
    """u^e by square-and-multiply."""
    _require_unit(u)
    if e < 0:
        raise ChainError(f"unit_pow needs e >= 0, not {e}")
    result = TruncatedPoly.one(u.n, u.p)
    square = u
    while e:
        if e & 1:
            result = result * square
        square = square * square
        e >>= 1
    return result


def log_trunc(u):
    _require_unit(u)
    return TruncatedPoly(batch_log(u.coefficients, u.p).tolist(), u.p)
