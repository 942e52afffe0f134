import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from chain.exceptions import PrimeTooSmall
from chain.maps import chain_maps
from fpcore.matrices import FpMatrix
from fpcore.vectors import all_vectors, vector_index
from nilalg.families import chain_algebra, rank1_algebra, zero_algebra

from .datum import (
    SOURCE_CHAIN,
    SOURCE_CUBE_ZERO,
    annihilator,
    chain_descent_datum,
    descent_datum,
    fixed_points,
    from_document,
    rank_one_conjugation,
    to_document,
)
from .exceptions import DescentError, DescentUnavailable


def rank1(diagonal, p):
    return rank1_algebra(FpMatrix.diagonal(diagonal, p))


class DescentDatumTests(SimpleTestCase):
    def test_zero_algebra(self):
        datum = descent_datum(zero_algebra(2, 5))
        size = 25
        np.testing.assert_array_equal(
            datum.conjugation_table, np.repeat(np.arange(size)[:, None], size, axis=1)
        )
        for x in all_vectors(2, 5):
            self.assertEqual(datum.exponent(x), tuple(int(-v % 5) for v in x))

    def test_rank1_n2(self):
        datum = descent_datum(rank1([1, 0], 3))
        self.assertEqual(datum.source, SOURCE_CUBE_ZERO)
        self.assertEqual(datum.exponent((1, 0)), (2, 1))
        self.assertEqual(datum.conjugate((1, 0), (1, 0)), (1, 2))
        self.assertEqual(datum.coefficient_constraint, "b_{x - x*z} = b_x^z")

    def test_exponent_is_circle_inverse(self):
        for algebra in (rank1([1, 1, 0], 5), rank1([1, 2, 0, 0], 3)):
            datum = descent_datum(algebra)
            vectors = datum.vectors
            inverses = vector_index(algebra.circle_inv_many(vectors), algebra.p)
            np.testing.assert_array_equal(datum.action_exponent, inverses)
            products = algebra.circle_mul_many(vectors, vectors[datum.action_exponent])
            self.assertFalse(products.any())

    def test_right_action(self):
        algebra = rank1([1, 2, 0], 5)
        datum = descent_datum(algebra)
        table = datum.conjugation_table
        vectors = datum.vectors
        self.assertIs(datum.rows_are_permutations(), True)
        for z in range(0, len(vectors), 11):
            for w in range(0, len(vectors), 7):
                both = vector_index(vectors[z] + vectors[w], 5)
                np.testing.assert_array_equal(table[table[:, z], w], table[:, both])

    def test_rank_one_closed_form(self):
        phi = FpMatrix.diagonal([1, 2, 0], 5)
        datum = descent_datum(rank1_algebra(phi))
        for r in all_vectors(3, 5)[::13]:
            for t in all_vectors(3, 5)[::17]:
                self.assertEqual(rank_one_conjugation(phi, r, t), datum.conjugate(r, t))

    def test_fixed_points_are_annihilator(self):
        for algebra in (rank1([1, 0, 0], 3), rank1([1, 1, 0], 5), zero_algebra(2, 3)):
            datum = descent_datum(algebra)
            np.testing.assert_array_equal(fixed_points(datum), annihilator(algebra))

    def test_cube_nonzero(self):
        with self.assertRaisesMessage(DescentUnavailable, "use chain_descent_datum"):
            descent_datum(chain_algebra(3, 5))

    def test_document(self):
        datum = descent_datum(rank1([1, 0], 3))
        doc = json.loads(json.dumps(to_document(datum)))
        again = from_document(doc)
        np.testing.assert_array_equal(again.conjugation_table, datum.conjugation_table)
        np.testing.assert_array_equal(again.action_exponent, datum.action_exponent)
        self.assertIsNone(again.evaluation)

    def test_bad_document(self):
        doc = to_document(descent_datum(rank1([1, 0], 3)))
        doc["conjugation_table"] = doc["conjugation_table"][:-1]
        with self.assertRaises(DescentError):
            from_document(doc)
        del doc["conjugation_table"]
        with self.assertRaises(DescentError):
            from_document(doc)


class ChainDescentTests(SimpleTestCase):
    def test_identity_row(self):
        datum = chain_descent_datum(chain_algebra(3, 5))
        self.assertEqual(datum.source, SOURCE_CHAIN)
        np.testing.assert_array_equal(datum.conjugation_table[:, 0], np.arange(125))
        self.assertIs(datum.rows_are_permutations(), True)
        self.assertIsNone(datum.action_exponent)

    def test_evaluation(self):
        maps = chain_maps(3, 5)
        datum = chain_descent_datum(maps.algebra)
        for g in (5, 17, 99):
            inverse = maps.algebra.circle_inv(tuple(maps.vectors[g].tolist()))
            self.assertEqual(
                tuple(maps.vectors[datum.evaluation[g]].tolist()),
                maps.b_inverse(inverse),
            )

    def test_agrees_with_cube_zero_path(self):
        maps = chain_maps(2, 5)
        chain = chain_descent_datum(maps.algebra).conjugation_table
        direct = descent_datum(maps.algebra).conjugation_table
        minus_b = vector_index(-maps.b_table, 5)
        np.testing.assert_array_equal(chain, direct[:, minus_b])

    def test_small_prime(self):
        with self.assertRaises(PrimeTooSmall):
            chain_descent_datum(chain_algebra(3, 3))


class CommandTests(SimpleTestCase):
    def run_command(self, doc):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "algebra.json")
            path.write_text(json.dumps(doc))
            out = Path(tmp, "descent.json")
            stdout = StringIO()
            call_command("descent", str(path), "--out", str(out), stdout=stdout)
            return stdout.getvalue(), json.loads(out.read_text())

    def test_rank1(self):
        output, doc = self.run_command(
            {"p": 3, "n": 2, "family": "rank1", "matrix": [[1, 0], [0, 0]]}
        )
        self.assertIn("source: cube-zero", output)
        self.assertEqual(len(doc["conjugation_table"]), 9)
        self.assertEqual(doc["action_exponent"][3], vector_index([2, 1], 3))

    def test_chain(self):
        output, doc = self.run_command({"p": 5, "n": 3, "family": "chain"})
        self.assertIn("source: chain", output)
        self.assertEqual(len(doc["basis_action"]), 125)
        self.assertIn("evaluation", doc)

    def test_chain_small_prime(self):
        with self.assertRaisesMessage(CommandError, "requires p > n") as cm:
            self.run_command({"p": 3, "n": 3, "family": "chain"})
        self.assertEqual(cm.exception.returncode, 1)

    def test_other_algebra(self):
        structure = np.zeros((4, 4, 4), dtype=int)
        structure[0, 0, 1] = 1
        structure[0, 1, 2] = structure[1, 0, 2] = 1
        with self.assertRaises(CommandError) as cm:
            self.run_command({"p": 5, "n": 4, "structure": structure.tolist()})
        self.assertEqual(cm.exception.returncode, 1)

    def test_rejects_invalid_structure(self):
        structure = np.zeros((2, 2, 2), dtype=int)
        structure[0, 1, 1] = 1
        with self.assertRaisesMessage(CommandError, "run validate") as cm:
            self.run_command({"p": 3, "n": 2, "structure": structure.tolist()})
        self.assertEqual(cm.exception.returncode, 1)
