"""
Elements of Aff_n(F_p) = Hol(F_p^n), stored as (linear, translation) pairs.

(B, v) is the block matrix [[B, v], [0, 1]] and acts by y -> B y + v, so
(B1, v1) o (B2, v2) = (B1 B2, v1 + B1 v2).
"""

from fpcore.exceptions import NotInvertible, ShapeMismatch
from fpcore.matrices import FpMatrix


class AffineMap:
    __slots__ = ("linear", "translation")

    def __init__(self, linear, translation, check=True):
        translation = tuple(int(v) % linear.p for v in translation)
        if not linear.is_square() or linear.rows != len(translation):
            raise ShapeMismatch(
                f"linear part {linear.shape} does not match a translation "
                f"of length {len(translation)}"
            )
        if check and not linear.is_invertible():
            raise NotInvertible("linear part is not invertible")
        self.linear = linear
        self.translation = translation

    @classmethod
    def identity(cls, n, p):
        return cls(FpMatrix.identity(n, p), (0,) * n, check=False)

    @property
    def p(self):
        return self.linear.p

    @property
    def n(self):
        return self.linear.rows

    def __eq__(self, other):
        if not isinstance(other, AffineMap):
            return NotImplemented
        return self.linear == other.linear and self.translation == other.translation

    def __hash__(self):
        return hash((self.linear, self.translation))

    def __repr__(self):
        linear, translation = self.linear.to_list(), list(self.translation)
        return f"AffineMap({linear}, {translation}, p={self.p})"

    def __matmul__(self, other):
        return self.compose(other)

    def compose(self, other):
        shifted = self.linear.apply(other.translation)
        return AffineMap(
            self.linear @ other.linear,
            [a + b for a, b in zip(self.translation, shifted)],
            check=False,
        )

    def apply(self, y):
        image = self.linear.apply(y)
        return tuple((a + b) % self.p for a, b in zip(image, self.translation))

    def inverse(self):
        inv = self.linear.inverse()
        return AffineMap(inv, [-v for v in inv.apply(self.translation)], check=False)

    def to_block_matrix(self):
        """The (n+1) x (n+1) matrix [[B, v], [0, 1]]."""
        n = self.n
        rows = [
            list(row) + [v]
            for row, v in zip(self.linear.to_list(), self.translation)
        ]
        rows.append([0] * n + [1])
        return FpMatrix(rows, self.p)


def lambda_map(y, p):
    """Translation by y, the image of y under the left regular representation."""
    return AffineMap(FpMatrix.identity(len(y), p), y, check=False)


def left_mul_matrix(algebra, x):
    return algebra.left_mul_matrix(x)


def tau(algebra, x):
    """tau(x) = (I + L_x, x), which sends y to x o y."""
    x = algebra.element(x)
    linear = FpMatrix.identity(algebra.n, algebra.p) + left_mul_matrix(algebra, x)
    # L_x is nilpotent so I + L_x is always a unit.
    assert linear.is_invertible(), "tau not invertible"
    return AffineMap(linear, x, check=False)
