import random

import numpy as np
from django.test import SimpleTestCase

from fpcore.matrices import FpMatrix
from fpcore.vectors import all_vectors
from nilalg.algebra import NilpotentAlgebra
from nilalg.families import chain_algebra, rank1_algebra, zero_algebra

from .exceptions import SubgroupError
from .maps import AffineMap, lambda_map, left_mul_matrix, tau
from .subgroups import (
    RegularSubgroupRep,
    build_subgroup,
    conjugate_subgroup,
    is_normalized_by_translations,
)


def diag_rank1(diagonal, p):
    return rank1_algebra(FpMatrix.diagonal(diagonal, p))


def random_structure_matrix(n, p, rng):
    phi = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        for j in range(i, n - 1):
            phi[i, j] = phi[j, i] = rng.randrange(p)
    return FpMatrix(phi, p)


def random_invertible(n, p, rng):
    while True:
        m = FpMatrix([[rng.randrange(p) for _ in range(n)] for _ in range(n)], p)
        if m.is_invertible():
            return m


class AffineMapTests(SimpleTestCase):
    def test_composition_matches_block_matrices(self):
        rng = random.Random(1)
        for _ in range(20):
            linear = [random_invertible(3, 5, rng) for _ in range(2)]
            shifts = [[rng.randrange(5) for _ in range(3)] for _ in range(2)]
            f, g = (AffineMap(m, v) for m, v in zip(linear, shifts))
            self.assertEqual(
                (f @ g).to_block_matrix(), f.to_block_matrix() @ g.to_block_matrix()
            )
            self.assertEqual(f @ f.inverse(), AffineMap.identity(3, 5))

    def test_singular_linear_part(self):
        with self.assertRaises(ValueError):
            AffineMap(FpMatrix([[1, 1], [1, 1]], 3), [0, 0])

    def test_lambda(self):
        self.assertEqual(lambda_map((0, 0), 5), AffineMap.identity(2, 5))
        self.assertEqual(
            lambda_map((1, 2), 5) @ lambda_map((3, 4), 5), lambda_map((4, 1), 5)
        )
        self.assertEqual(lambda_map((1, 2), 5).apply((4, 4)), (0, 1))


class TauTests(SimpleTestCase):
    def test_left_mul_matrix(self):
        zero = left_mul_matrix(diag_rank1([1, 2, 0], 5), (0, 0, 0))
        self.assertFalse(zero.entries.any())
        L = left_mul_matrix(diag_rank1([3, 2, 0], 5), (1, 0, 0))
        self.assertEqual(L.to_list(), [[0, 0, 0], [0, 0, 0], [3, 0, 0]])
        L = left_mul_matrix(chain_algebra(3, 5), (1, 0, 0))
        self.assertEqual(L.to_list(), [[0, 0, 0], [1, 0, 0], [0, 1, 0]])

    def test_tau(self):
        a = diag_rank1([1, 0], 5)
        self.assertEqual(tau(a, (0, 0)), AffineMap.identity(2, 5))
        self.assertEqual(tau(a, (1, 0)).apply((1, 0)), (2, 1))
        for x in all_vectors(2, 5):
            self.assertEqual(tau(a, x).apply((0, 0)), tuple(x))

    def test_tau_is_circle_product(self):
        a = chain_algebra(3, 5)
        rng = random.Random(2)
        for _ in range(30):
            x = tuple(rng.randrange(5) for _ in range(3))
            y = tuple(rng.randrange(5) for _ in range(3))
            self.assertEqual(tau(a, x).apply(y), a.circle_mul(x, y))
            self.assertEqual(tau(a, x) @ tau(a, y), tau(a, a.circle_mul(x, y)))


class SubgroupTests(SimpleTestCase):
    def test_zero_algebra_gives_translations(self):
        t = build_subgroup(zero_algebra(3, 3))
        self.assertIs(t.is_translation_group(), True)

    def test_rank1_n2(self):
        t = build_subgroup(diag_rank1([1, 0], 3))
        self.assertEqual(len(t), 9)
        self.assertEqual(t.distinct_linear_parts(), 3)
        self.assertEqual(len(set(m.translation for m in t.maps())), 9)

    def test_chain_closure(self):
        t = build_subgroup(chain_algebra(3, 5))
        self.assertEqual(len(t), 125)
        self.assertIn(tau(t.algebra, (1, 2, 3)), t)

    def test_closure_failure(self):
        # Commutative and nilpotent but not associative.
        structure = np.zeros((3, 3, 3), dtype=np.int64)
        structure[0, 0, 1] = 1
        structure[1, 1, 2] = 1
        with self.assertRaisesMessage(SubgroupError, "closure fails"):
            build_subgroup(NilpotentAlgebra(structure, 3))

    def test_bad_stack(self):
        with self.assertRaises(SubgroupError):
            RegularSubgroupRep(np.zeros((9, 2, 2)), 3)

    def test_normalized_iff_cube_zero(self):
        rng = random.Random(20161)
        algebras = [chain_algebra(3, 5), chain_algebra(3, 3), zero_algebra(3, 5)]
        for n, p in ((3, 3), (3, 5), (4, 3)):
            algebras += [
                rank1_algebra(random_structure_matrix(n, p, rng)) for _ in range(50)
            ]
        for a in algebras:
            with self.subTest(algebra=a):
                self.assertEqual(
                    is_normalized_by_translations(build_subgroup(a)), a.cube_is_zero()
                )

    def test_conjugation_by_translation(self):
        a = diag_rank1([1, 2, 0], 5)
        for x in ((1, 2, 3), (4, 0, 1)):
            for y in ((0, 1, 0), (2, 2, 2)):
                conjugate = lambda_map(y, 5) @ tau(a, x) @ lambda_map(y, 5).inverse()
                shifted = tuple(u - v for u, v in zip(x, a.multiply(x, y)))
                self.assertEqual(conjugate, tau(a, shifted))


class ConjugationTests(SimpleTestCase):
    def test_identity(self):
        t = build_subgroup(diag_rank1([1, 1, 0], 3))
        same = conjugate_subgroup(t, FpMatrix.identity(3, 3))
        self.assertEqual(same.canonical_key, t.canonical_key)

    def test_translation_group_is_fixed(self):
        t = build_subgroup(zero_algebra(3, 5))
        rng = random.Random(4)
        for _ in range(5):
            self.assertEqual(conjugate_subgroup(t, random_invertible(3, 5, rng)), t)

    def test_automorphism_fixes(self):
        t = build_subgroup(diag_rank1([1, 0], 5))
        self.assertEqual(conjugate_subgroup(t, FpMatrix([[4, 0], [0, 1]], 5)), t)
        self.assertNotEqual(conjugate_subgroup(t, FpMatrix([[1, 1], [0, 1]], 5)), t)

    def test_conjugate_is_pushforward(self):
        rng = random.Random(9)
        a = chain_algebra(3, 5)
        t = build_subgroup(a)
        for _ in range(3):
            P = random_invertible(3, 5, rng)
            conjugate = conjugate_subgroup(t, P)
            self.assertEqual(conjugate, build_subgroup(a.pushforward(P)))
            Q = AffineMap(P, (0, 0, 0))
            x = (1, 4, 2)
            self.assertIn(Q @ tau(a, x) @ Q.inverse(), conjugate)
