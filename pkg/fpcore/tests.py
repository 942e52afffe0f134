import random

import numpy as np
from django.test import SimpleTestCase

from .exceptions import NoSquareClass, NotInvertible, NotPrime, ShapeMismatch
from .field import (
    FpScalar,
    canonical_nonsquare,
    check_prime,
    legendre_is_square,
    sqrt_mod,
    sum_of_two_squares,
)
from .matrices import FpMatrix, batch_inverse, mat_inverse, mat_mul, mat_transpose
from .orders import (
    CASE_EVEN_MINUS,
    CASE_EVEN_PLUS,
    CASE_ODD,
    form_type,
    gl_order,
    go_order,
    go_order_degree,
)
from .vectors import all_vectors, vector_index


def random_invertible(n, p, rng):
    while True:
        m = FpMatrix([[rng.randrange(p) for _ in range(n)] for _ in range(n)], p)
        if m.is_invertible():
            return m


class FieldTests(SimpleTestCase):
    def test_check_prime(self):
        self.assertEqual(check_prime(7), 7)
        for bad in (2, 9, 1, 15):
            with self.subTest(bad=bad), self.assertRaises(NotPrime):
                check_prime(bad)

    def test_legendre(self):
        self.assertIs(legendre_is_square(4, 5), True)
        self.assertIs(legendre_is_square(2, 5), False)
        self.assertIs(legendre_is_square(-1, 5), True)

    def test_legendre_zero(self):
        with self.assertRaisesMessage(NoSquareClass, "zero has no square class"):
            legendre_is_square(0, 5)

    def test_legendre_multiplicative(self):
        for p in (3, 5, 7, 11):
            for a in range(1, p):
                for b in range(1, p):
                    self.assertEqual(
                        legendre_is_square(a * b, p),
                        legendre_is_square(a, p) == legendre_is_square(b, p),
                    )

    def test_canonical_nonsquare(self):
        self.assertEqual(canonical_nonsquare(3), 2)
        self.assertEqual(canonical_nonsquare(5), 2)
        self.assertEqual(canonical_nonsquare(7), 3)

    def test_sqrt_mod(self):
        self.assertEqual(sqrt_mod(4, 5), 2)
        self.assertIsNone(sqrt_mod(2, 5))

    def test_sum_of_two_squares(self):
        self.assertEqual(sum_of_two_squares(2, 3), (1, 1))
        self.assertEqual(sum_of_two_squares(3, 5), (2, 2))
        self.assertEqual(sum_of_two_squares(1, 7), (0, 1))
        for p in (3, 5, 7, 13):
            for q in range(1, p):
                f, g = sum_of_two_squares(q, p)
                self.assertEqual((f * f + g * g) % p, q)

    def test_scalar_arithmetic(self):
        a = FpScalar(3, 7)
        self.assertEqual(a + 5, FpScalar(1, 7))
        self.assertEqual(a * a.inverse(), FpScalar(1, 7))
        self.assertEqual(-a, FpScalar(4, 7))
        self.assertEqual(FpScalar(-1, 7).residue, 6)
        with self.assertRaises(NotInvertible):
            FpScalar(0, 7).inverse()


class MatrixTests(SimpleTestCase):
    def test_identity_is_neutral(self):
        m = FpMatrix([[1, 2], [3, 4]], 5)
        self.assertEqual(mat_mul(FpMatrix.identity(2, 5), m), m)
        self.assertEqual(m @ FpMatrix.identity(2, 5), m)

    def test_unipotent_inverse(self):
        m = FpMatrix([[1, 1], [0, 1]], 5)
        self.assertEqual(mat_inverse(m), FpMatrix([[1, 4], [0, 1]], 5))

    def test_singular(self):
        with self.assertRaisesMessage(NotInvertible, "not invertible"):
            mat_inverse(FpMatrix([[1, 2], [2, 4]], 5))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeMismatch):
            mat_mul(FpMatrix([[1, 2]], 5), FpMatrix([[1, 2]], 5))

    def test_transpose(self):
        m = FpMatrix([[1, 2, 3], [4, 5, 6]], 7)
        self.assertEqual(mat_transpose(m).to_list(), [[1, 4], [2, 5], [3, 6]])

    def test_random_inverses(self):
        rng = random.Random(7)
        for n in (2, 3, 4):
            for p in (3, 5, 7):
                for _ in range(25):
                    m = random_invertible(n, p, rng)
                    inv = m.inverse()
                    self.assertEqual(m @ inv, FpMatrix.identity(n, p))
                    self.assertEqual(inv @ m, FpMatrix.identity(n, p))

    def test_associativity(self):
        rng = random.Random(11)
        for _ in range(20):
            a, b, c = (random_invertible(3, 7, rng) for _ in range(3))
            self.assertEqual((a @ b) @ c, a @ (b @ c))

    def test_det_and_rank(self):
        m = FpMatrix([[2, 1], [1, 1]], 5)
        self.assertEqual(m.det(), 1)
        self.assertEqual(FpMatrix([[1, 2], [2, 4]], 5).rank(), 1)

    def test_batch_inverse_matches(self):
        rng = np.random.default_rng(3)
        stack = rng.integers(0, 5, size=(200, 3, 3))
        inverses, mask = batch_inverse(stack, 5)
        for m, inv, ok in zip(stack, inverses, mask):
            matrix = FpMatrix(m, 5)
            self.assertEqual(bool(ok), matrix.is_invertible())
            if ok:
                self.assertEqual(FpMatrix(inv, 5), matrix.inverse())


class VectorTests(SimpleTestCase):
    def test_enumeration_order(self):
        vectors = all_vectors(2, 3)
        self.assertEqual(vectors[:4].tolist(), [[0, 0], [0, 1], [0, 2], [1, 0]])
        self.assertEqual(vector_index(vectors, 3).tolist(), list(range(9)))


class OrderTests(SimpleTestCase):
    def test_gl_order(self):
        self.assertEqual(gl_order(2, 5), 480)
        self.assertEqual(gl_order(0, 5), 1)
        self.assertEqual(gl_order(3, 3), 11232)

    def test_gl_order_brute_force(self):
        for n, p in ((1, 3), (2, 3), (2, 5)):
            count = sum(
                FpMatrix(np.array(v).reshape(n, n), p).is_invertible()
                for v in all_vectors(n * n, p)
            )
            self.assertEqual(count, gl_order(n, p))

    def test_go_order(self):
        self.assertEqual(go_order(1, 7, CASE_ODD), 2)
        self.assertEqual(go_order(2, 5, CASE_EVEN_PLUS), 8)
        self.assertEqual(go_order(2, 5, CASE_EVEN_MINUS), 12)
        self.assertEqual(go_order(3, 3, CASE_ODD), 48)

    def test_go_order_case_mismatch(self):
        with self.assertRaises(ValueError):
            go_order(2, 5, CASE_ODD)
        with self.assertRaises(ValueError):
            go_order(3, 5, CASE_EVEN_PLUS)

    def test_go_order_degree(self):
        self.assertEqual(go_order_degree(1), 0)
        self.assertEqual(go_order_degree(2), 1)
        self.assertEqual(go_order_degree(3), 3)
        self.assertEqual(go_order_degree(4), 6)
        self.assertEqual(go_order_degree(5), 10)

    def test_go_order_degree_matches_growth(self):
        # A degree-d polynomial with leading coefficient c has c * p^d <= |f(p)|
        # < (c + 1) * p^d for large p; the leading coefficient here is 2.
        p = 10007
        for k in range(1, 7):
            for s in (1, 5):
                order = go_order(k, p, form_type(k, s, p))
                degree = go_order_degree(k)
                self.assertLess(p**degree, order)
                self.assertLess(order, 3 * p**degree)

    def test_form_type(self):
        self.assertEqual(form_type(2, 1, 5), CASE_EVEN_PLUS)
        self.assertEqual(form_type(2, 2, 5), CASE_EVEN_MINUS)
        # -1 is not a square mod 3, so I_2 is anisotropic there.
        self.assertEqual(form_type(2, 1, 3), CASE_EVEN_MINUS)
        self.assertEqual(form_type(2, 2, 3), CASE_EVEN_PLUS)
        self.assertEqual(form_type(3, 1, 3), CASE_ODD)
