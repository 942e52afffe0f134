"""
Scalars of F_p and the few number-theoretic helpers the normal forms need.

Residues are always kept canonical, in range(p).
"""

from dataclasses import dataclass
from functools import lru_cache

from django.conf import settings

from .exceptions import NoSquareClass, NotInvertible, NotPrime


@lru_cache(maxsize=None)
def check_prime(p):
    """
    Return p if it is an odd prime below HOPF_MAX_PRIME, raise NotPrime
    otherwise. Trial division is plenty at this size.
    """
    if not isinstance(p, int) or isinstance(p, bool):
        raise NotPrime(f"p must be an integer, not {p.__class__.__name__}")
    if p < 3 or p % 2 == 0:
        raise NotPrime(f"p must be an odd prime, not {p}")
    if p >= settings.HOPF_MAX_PRIME:
        raise NotPrime(f"p={p} is above the supported bound {settings.HOPF_MAX_PRIME}")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise NotPrime(f"{p} is divisible by {d}")
        d += 2
    return p


def inverse_mod(a, p):
    a %= p
    if a == 0:
        raise NotInvertible("0 is not invertible")
    return pow(a, -1, p)


def legendre_is_square(a, p):
    """
    Return True iff the nonzero residue a is a square mod p (Euler's
    criterion).
    """
    a %= p
    if a == 0:
        raise NoSquareClass("zero has no square class")
    return pow(a, (p - 1) // 2, p) == 1


@lru_cache(maxsize=None)
def canonical_nonsquare(p):
    """The least positive non-residue mod p; every normal form uses it."""
    check_prime(p)
    for a in range(2, p):
        if not legendre_is_square(a, p):
            return a
    raise NotPrime(f"{p} has no non-residue")  # pragma: no cover


def sqrt_mod(q, p):
    """Smallest t in range(p) with t*t = q, or None."""
    q %= p
    for t in range(p):
        if t * t % p == q:
            return t
    return None


def sum_of_two_squares(q, p):
    """
    Return (f, g) with f^2 + g^2 = q mod p, smallest f first, then smallest g.
    """
    q %= p
    if q == 0:
        raise NoSquareClass("q must be nonzero")
    roots = {}
    for t in range(p - 1, -1, -1):
        roots[t * t % p] = t
    for f in range(p):
        g = roots.get((q - f * f) % p)
        if g is not None:
            return f, g
    # Every nonzero residue is a sum of two squares when p is odd.
    raise AssertionError(f"{q} is not a sum of two squares mod {p}")  # pragma: no cover


@dataclass(frozen=True)
class FpScalar:
    residue: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "residue", int(self.residue) % self.p)

    def __int__(self):
        return self.residue

    def __index__(self):
        return self.residue

    def __str__(self):
        return str(self.residue)

    def _coerce(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ValueError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return FpScalar(self.residue + value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return FpScalar(self.residue - value, self.p)

    def __rsub__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return FpScalar(value - self.residue, self.p)

    def __mul__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return FpScalar(self.residue * value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.residue, self.p)

    def __pow__(self, exponent):
        if exponent < 0:
            return FpScalar(pow(self.inverse().residue, -exponent, self.p), self.p)
        return FpScalar(pow(self.residue, exponent, self.p), self.p)

    def __truediv__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return value
        return self * inverse_mod(value, self.p)

    def inverse(self):
        return FpScalar(inverse_mod(self.residue, self.p), self.p)

    def is_square(self):
        return legendre_is_square(self.residue, self.p)
