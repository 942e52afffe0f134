"""
Dense matrices over F_p backed by int64 numpy arrays.

FpMatrix is immutable: its array is flagged read-only and every result is a
new matrix. The batch helpers at the bottom work on raw (B, n, n) stacks and
are what the brute-force sweeps use.
"""

import numpy as np

from .exceptions import NotInvertible, ShapeMismatch
from .field import check_prime


def inverse_table(p):
    """inverse_table(p)[a] is a^-1 mod p, with 0 mapped to 0."""
    table = np.zeros(p, dtype=np.int64)
    table[1:] = [pow(a, -1, p) for a in range(1, p)]
    return table


class FpMatrix:
    __slots__ = ("p", "entries")

    def __init__(self, entries, p):
        check_prime(p)
        array = np.array(entries, dtype=np.int64)
        if array.ndim == 1 and array.size == 0:
            array = array.reshape(0, 0)
        if array.ndim != 2:
            raise ShapeMismatch(f"expected a 2-d array, got shape {array.shape}")
        array %= p
        array.setflags(write=False)
        self.p = p
        self.entries = array

    @classmethod
    def identity(cls, n, p):
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows, cols, p):
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def diagonal(cls, values, p):
        return cls(np.diag(np.array(values, dtype=np.int64)), p)

    @classmethod
    def block_diagonal(cls, blocks, p):
        """Assemble square blocks (FpMatrix or array-likes) along the diagonal."""
        arrays = [b.entries if isinstance(b, FpMatrix) else np.array(b) for b in blocks]
        size = sum(a.shape[0] for a in arrays)
        result = np.zeros((size, size), dtype=np.int64)
        offset = 0
        for a in arrays:
            k = a.shape[0]
            result[offset : offset + k, offset : offset + k] = a
            offset += k
        return cls(result, p)

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def is_square(self):
        return self.rows == self.cols

    def is_symmetric(self):
        return self.is_square() and np.array_equal(self.entries, self.entries.T)

    def __getitem__(self, index):
        value = self.entries[index]
        if isinstance(value, np.ndarray):
            return FpMatrix(value if value.ndim == 2 else value.reshape(1, -1), self.p)
        return int(value)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.p, self.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"FpMatrix({self.to_list()}, p={self.p})"

    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __add__(self, other):
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return FpMatrix(self.entries + other.entries, self.p)

    def __sub__(self, other):
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return FpMatrix(self.entries - other.entries, self.p)

    def scale(self, c):
        return FpMatrix(self.entries * int(c), self.p)

    def apply(self, vector):
        """Matrix times column vector, as a tuple of residues."""
        vector = np.array([int(v) for v in vector], dtype=np.int64)
        if vector.shape != (self.cols,):
            raise ShapeMismatch(f"cannot apply {self.shape} to length {vector.size}")
        return tuple(int(v) for v in (self.entries @ vector) % self.p)

    @property
    def T(self):
        return mat_transpose(self)

    def inverse(self):
        return mat_inverse(self)

    def rank(self):
        return mat_rank(self)

    def det(self):
        return mat_det(self)

    def is_invertible(self):
        return self.is_square() and self.rank() == self.rows

    def to_list(self):
        return self.entries.tolist()


def _check_same_field(a, b):
    if a.p != b.p:
        raise ShapeMismatch(f"cannot mix matrices over F_{a.p} and F_{b.p}")


def mat_mul(a, b):
    _check_same_field(a, b)
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return FpMatrix(a.entries @ b.entries, a.p)


def mat_transpose(a):
    return FpMatrix(a.entries.T, a.p)


def row_reduce(array, p):
    """
    Reduced row echelon form of a 2-d array over F_p.

    Returns (echelon, pivot_columns); rows below len(pivot_columns) are zero.
    Pivots are chosen as the first nonzero entry of each column.
    """
    m = np.array(array, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(m[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = r + nonzero[0]
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        factors = m[:, c].copy()
        factors[r] = 0
        m = (m - np.outer(factors, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def mat_rank(a):
    return len(row_reduce(a.entries, a.p)[1])


def mat_det(a):
    if not a.is_square():
        raise ShapeMismatch(f"determinant of a non-square {a.shape} matrix")
    p = a.p
    m = a.entries.copy()
    n = a.rows
    det = 1
    for c in range(n):
        nonzero = np.nonzero(m[c:, c])[0]
        if nonzero.size == 0:
            return 0
        pivot = c + nonzero[0]
        if pivot != c:
            m[[c, pivot]] = m[[pivot, c]]
            det = -det
        det = det * int(m[c, c]) % p
        inv = pow(int(m[c, c]), -1, p)
        for r in range(c + 1, n):
            if m[r, c]:
                m[r] = (m[r] - m[r, c] * inv * m[c]) % p
    return det % p


def mat_inverse(a):
    """Gauss-Jordan inverse with first-nonzero pivot selection."""
    if not a.is_square():
        raise NotInvertible(f"not invertible: {a.shape} is not square")
    n = a.rows
    augmented = np.concatenate([a.entries, np.eye(n, dtype=np.int64)], axis=1)
    reduced, pivots = row_reduce(augmented, a.p)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("not invertible")
    return FpMatrix(reduced[:, n:], a.p)


def batch_inverse(stack, p):
    """
    Invert every matrix of a (B, n, n) stack mod p.

    Returns (inverses, invertible) where invertible is a boolean mask; rows of
    inverses where the mask is False hold garbage.
    """
    stack = np.asarray(stack, dtype=np.int64) % p
    count, n, _ = stack.shape
    inv = inverse_table(p)
    aug = np.concatenate(
        [stack, np.broadcast_to(np.eye(n, dtype=np.int64), (count, n, n))], axis=2
    )
    invertible = np.ones(count, dtype=bool)
    rows = np.arange(count)
    for c in range(n):
        candidates = aug[:, c:, c] != 0
        invertible &= candidates.any(axis=1)
        pivot = c + candidates.argmax(axis=1)
        pivot_rows = aug[rows, pivot].copy()
        aug[rows, pivot] = aug[rows, c]
        aug[rows, c] = pivot_rows
        aug[:, c] = aug[:, c] * inv[aug[:, c, c]][:, None] % p
        factors = aug[:, :, c].copy()
        factors[:, c] = 0
        aug = (aug - factors[:, :, None] * aug[:, c][:, None, :]) % p
    return aug[:, :, n:], invertible


def batch_matmul(a, b, p):
    return np.matmul(a, b) % p
