import json
import random
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from fpcore.matrices import FpMatrix
from fpcore.vectors import all_vectors

from .algebra import NilpotentAlgebra
from .exceptions import DimensionMismatch, NotNilpotent, StructureMatrixError
from .families import chain_algebra, rank1_algebra, zero_algebra
from .files import AlgebraFileError, dump_document, load_algebra, parse_document


def diag_rank1(diagonal, p):
    return rank1_algebra(FpMatrix.diagonal(diagonal, p))


class ValidationTests(SimpleTestCase):
    def test_zero_multiplication(self):
        report = zero_algebra(3, 5).validate()
        self.assertIs(report.passed, True)
        self.assertEqual(report.nilpotency_index, 2)

    def test_rank1_passes(self):
        self.assertIs(diag_rank1([1, 0], 5).validate().passed, True)

    def test_idempotent_is_not_nilpotent(self):
        structure = np.zeros((2, 2, 2), dtype=np.int64)
        structure[0, 0, 0] = 1
        report = NilpotentAlgebra(structure, 5).validate()
        self.assertIs(report.nilpotent, False)
        self.assertIs(report.passed, False)

    def test_commutativity_violation_is_located(self):
        structure = np.zeros((2, 2, 2), dtype=np.int64)
        structure[0, 1, 1] = 1
        report = NilpotentAlgebra(structure, 3).validate()
        self.assertIs(report.commutative, False)
        self.assertEqual(report.commutativity_violation, (0, 1))

    def test_associativity_violation(self):
        # (e0 e0) e1 = e2 but e0 (e0 e1) = 0
        structure = np.zeros((3, 3, 3), dtype=np.int64)
        structure[0, 0, 1] = 1
        structure[1, 1, 2] = 1
        report = NilpotentAlgebra(structure, 5).validate()
        self.assertIs(report.associative, False)

    def test_chain_passes(self):
        self.assertIs(chain_algebra(4, 5).validate().passed, True)

    def test_shape_checked(self):
        with self.assertRaises(DimensionMismatch):
            NilpotentAlgebra(np.zeros((2, 2, 3)), 5)


class ProductTests(SimpleTestCase):
    def test_multiply(self):
        a = diag_rank1([1, 0], 5)
        self.assertEqual(a.multiply((1, 0), (1, 0)), (0, 1))
        self.assertEqual(a.multiply((3, 2), (0, 0)), (0, 0))
        chain = chain_algebra(3, 5)
        self.assertEqual(chain.multiply((1, 0, 0), (0, 1, 0)), (0, 0, 1))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            diag_rank1([1, 0], 5).multiply((1, 0, 0), (1, 0))

    def test_power_dims(self):
        self.assertEqual(zero_algebra(3, 3).power_dims(), [3, 0])
        self.assertEqual(diag_rank1([1, 1, 0, 0], 3).power_dims(), [4, 1, 0])
        self.assertEqual(chain_algebra(3, 5).power_dims(), [3, 2, 1, 0])

    def test_power_dims_rejects_idempotents(self):
        structure = np.zeros((1, 1, 1), dtype=np.int64)
        structure[0, 0, 0] = 1
        with self.assertRaises(NotNilpotent):
            NilpotentAlgebra(structure, 3).power_dims()

    def test_cube_is_zero(self):
        self.assertIs(diag_rank1([1, 2, 0], 5).cube_is_zero(), True)
        self.assertIs(chain_algebra(2, 5).cube_is_zero(), True)
        self.assertIs(chain_algebra(3, 5).cube_is_zero(), False)

    def test_cube_matches_power_dims(self):
        for algebra in (chain_algebra(3, 3), diag_rank1([1, 1, 0], 3)):
            dims = algebra.power_dims()
            self.assertEqual(algebra.cube_is_zero(), len(dims) <= 3)


class CircleTests(SimpleTestCase):
    def test_identity_and_formula(self):
        a = diag_rank1([1, 0], 5)
        self.assertEqual(a.circle_mul((3, 4), (0, 0)), (3, 4))
        self.assertEqual(a.circle_mul((1, 0), (1, 0)), (2, 1))

    def test_chain_inverse(self):
        a = chain_algebra(3, 5)
        # -z + z^2 - z^3
        self.assertEqual(a.circle_inv((1, 0, 0)), (4, 1, 4))

    def test_inverse_exhaustive(self):
        for a in (chain_algebra(3, 3), diag_rank1([1, 2, 0], 5)):
            for x in all_vectors(a.n, a.p):
                self.assertEqual(a.circle_mul(x, a.circle_inv(x)), a.zero())

    def test_vectorised_inverse_matches(self):
        a = chain_algebra(3, 5)
        xs = all_vectors(3, 5)
        inverses = a.circle_inv_many(xs)
        self.assertEqual(
            [tuple(v) for v in inverses.tolist()],
            [a.circle_inv(x) for x in xs],
        )

    def test_associative_and_commutative(self):
        a = chain_algebra(3, 5)
        table = a.circle_table()
        np.testing.assert_array_equal(table, table.T)
        # [x, y, z] -> (x o y) o z and x o (y o z) over all 125^3 triples.
        np.testing.assert_array_equal(table[table, :], table[:, table])

    def test_circle_power(self):
        a = chain_algebra(3, 5)
        self.assertEqual(a.circle_power((1, 2, 3), 1), (1, 2, 3))
        self.assertEqual(a.circle_power((1, 2, 3), 0), (0, 0, 0))
        self.assertEqual(a.circle_power((1, 0, 0), 2), (2, 1, 0))
        b = diag_rank1([1, 1, 0], 5)
        for x in all_vectors(3, 5):
            self.assertEqual(b.circle_power(x, 5), (0, 0, 0))

    def test_power_matches_repeated_product(self):
        a = chain_algebra(3, 7)
        x = (3, 1, 4)
        repeated = a.zero()
        for s in range(10):
            self.assertEqual(a.circle_power(x, s), repeated)
            repeated = a.circle_mul(repeated, x)

    def test_elementary_abelian(self):
        rank1 = diag_rank1([1, 2, 0], 5)
        self.assertIs(rank1.circle_group_is_elementary_abelian(), True)
        self.assertIs(chain_algebra(3, 5).circle_group_is_elementary_abelian(), True)
        self.assertIs(chain_algebra(3, 3).circle_group_is_elementary_abelian(), False)

    def test_elementary_abelian_sampled(self):
        with self.settings(HOPF_EXHAUSTIVE_LIMIT=10, HOPF_SAMPLE_SIZE=200):
            chain = chain_algebra(3, 3)
            self.assertIs(chain.circle_group_is_elementary_abelian(), False)
            rank1 = diag_rank1([1, 0], 5)
            self.assertIs(rank1.circle_group_is_elementary_abelian(), True)


class FamilyTests(SimpleTestCase):
    def test_rank1_rejects_bad_matrices(self):
        with self.assertRaises(StructureMatrixError):
            rank1_algebra(FpMatrix([[0, 1], [0, 0]], 5))
        with self.assertRaises(StructureMatrixError):
            rank1_algebra(FpMatrix([[1, 1], [1, 0]], 5))

    def test_rank1_zero_matrix(self):
        self.assertFalse(zero_algebra(3, 5).structure.any())


class BasisChangeTests(SimpleTestCase):
    def test_pushforward_is_isomorphism(self):
        a = chain_algebra(3, 5)
        P = FpMatrix([[1, 2, 0], [0, 1, 3], [1, 0, 1]], 5)
        b = a.pushforward(P)
        rng = random.Random(3)
        for _ in range(50):
            x = tuple(rng.randrange(5) for _ in range(3))
            y = tuple(rng.randrange(5) for _ in range(3))
            self.assertEqual(
                P.apply(a.multiply(x, y)), b.multiply(P.apply(x), P.apply(y))
            )

    def test_square_line(self):
        phi = FpMatrix([[1, 2, 0], [2, 3, 0], [0, 0, 0]], 7)
        a = rank1_algebra(phi)
        P = FpMatrix([[0, 1, 0], [1, 1, 2], [3, 0, 1]], 7)
        phi_back, G = a.pushforward(P).square_line()
        self.assertEqual(a.pushforward(P).pushforward(G), rank1_algebra(phi_back))

    def test_square_line_rejects_chains(self):
        with self.assertRaises(StructureMatrixError):
            chain_algebra(3, 5).square_line()


class FileTests(SimpleTestCase):
    def test_parse_family_files(self):
        a = parse_document({"p": 5, "n": 3, "family": "chain"})
        self.assertEqual(a, chain_algebra(3, 5))
        b = parse_document(
            {"p": 3, "n": 2, "family": "rank1", "matrix": [[1, 0], [0, 0]]}
        )
        self.assertEqual(b, diag_rank1([1, 0], 3))

    def test_dump_reparses(self):
        a = diag_rank1([1, 2, 0], 5)
        self.assertEqual(parse_document(json.loads(json.dumps(dump_document(a)))), a)

    def test_locations(self):
        with self.assertRaisesMessage(AlgebraFileError, "$.structure[1]"):
            parse_document({"p": 3, "n": 2, "structure": [[[0, 0], [0, 0]], [[0, 0]]]})
        with self.assertRaisesMessage(AlgebraFileError, "missing key 'p'"):
            parse_document({"n": 2, "family": "chain"})

    def test_mismatched_structure(self):
        doc = dump_document(chain_algebra(2, 5))
        doc["structure"][0][0][1] = 2
        with self.assertRaises(AlgebraFileError):
            parse_document(doc)

    def test_malformed_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "bad.json")
            path.write_text('{"p": 3,')
            with self.assertRaisesMessage(AlgebraFileError, "line 1"):
                load_algebra(path)


class ValidateCommandTests(SimpleTestCase):
    def run_validate(self, doc=None, raw=None):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "algebra.json")
            path.write_text(raw if raw is not None else json.dumps(doc))
            stdout = StringIO()
            call_command("validate", str(path), stdout=stdout)
            return stdout.getvalue()

    def test_valid_rank1(self):
        matrix = [[1, 0, 0], [0, 1, 0], [0, 0, 0]]
        output = self.run_validate(
            {"p": 5, "n": 3, "family": "rank1", "matrix": matrix}
        )
        self.assertIn("valid", output)
        self.assertIn("A^3 = 0: yes", output)

    def test_noncommutative(self):
        structure = np.zeros((2, 2, 2), dtype=int)
        structure[0, 1, 1] = 1
        with self.assertRaises(CommandError) as cm:
            self.run_validate({"p": 3, "n": 2, "structure": structure.tolist()})
        self.assertEqual(cm.exception.returncode, 1)

    def test_malformed(self):
        with self.assertRaises(CommandError) as cm:
            self.run_validate(raw="not json")
        self.assertEqual(cm.exception.returncode, 2)

    def test_not_utf8(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "algebra.json")
            path.write_bytes(b'{"p": 3, "n": 1, "family": "\xff\xfe"}')
            with self.assertRaisesMessage(AlgebraFileError, "not UTF-8"):
                load_algebra(path)
            with self.assertRaises(CommandError) as cm:
                call_command("validate", str(path), stdout=StringIO())
        self.assertEqual(cm.exception.returncode, 2)
