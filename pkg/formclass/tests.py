import json
import random
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from fpcore.field import canonical_nonsquare
from fpcore.matrices import FpMatrix
from fpcore.orders import CASE_EVEN_MINUS, CASE_EVEN_PLUS, CASE_ODD, CASE_ZERO, gl_order
from nilalg.families import chain_algebra, rank1_algebra
from nilalg.files import dump_document
from oracle.enumeration import iter_general_linear

from .counting import (
    case_forms,
    closed_form_counts,
    count_table,
    hgs_count,
    total_count,
)
from .exceptions import FormError, NoScalingExists, UnsupportedDimension
from .forms import (
    classify_algebra,
    diagonalize_congruence,
    normal_form_class,
    scaling_matrix,
)
from .stabilizers import (
    stabilizer_block_choices,
    stabilizer_membership,
    stabilizer_order,
)


def structure_matrix(block, p):
    m = len(block)
    phi = np.zeros((m + 1, m + 1), dtype=np.int64)
    phi[:m, :m] = block
    return FpMatrix(phi, p)


def random_structure_matrix(n, p, rng):
    phi = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        for j in range(i, n - 1):
            phi[i, j] = phi[j, i] = rng.randrange(p)
    return FpMatrix(phi, p)


def random_block_congruence(n, p, rng):
    while True:
        block = np.array(
            [[rng.randrange(p) for _ in range(n - 1)] for _ in range(n - 1)]
        )
        R = np.eye(n, dtype=np.int64)
        R[: n - 1, : n - 1] = block
        R = FpMatrix(R, p)
        if R.is_invertible():
            return R


class DiagonalizeTests(SimpleTestCase):
    def test_zero(self):
        fc = diagonalize_congruence(FpMatrix.zeros(3, 3, 5))
        self.assertEqual(fc.k, 0)
        self.assertEqual(fc.case_label, CASE_ZERO)

    def test_hyperbolic_plane(self):
        fc = diagonalize_congruence(structure_matrix([[0, 1], [1, 0]], 5))
        self.assertEqual((fc.k, fc.s, fc.case_label), (2, 1, CASE_EVEN_PLUS))
        # At p = 3 the hyperbolic plane is diag(1, 2), still of plus type.
        fc = diagonalize_congruence(structure_matrix([[0, 1], [1, 0]], 3))
        self.assertEqual((fc.k, fc.s, fc.case_label), (2, 2, CASE_EVEN_PLUS))

    def test_change_of_basis_shape(self):
        phi = structure_matrix([[1, 2, 3], [2, 0, 1], [3, 1, 4]], 7)
        fc = diagonalize_congruence(phi)
        P = fc.change_of_basis
        self.assertEqual(P.entries[-1].tolist(), [0, 0, 0, 1])
        self.assertEqual(P.entries[:, -1].tolist(), [0, 0, 0, 1])
        self.assertEqual((P @ phi @ P.T).scale(fc.scale), fc.normal_form)

    def test_odd_rank_nonsquare_discriminant(self):
        fc = diagonalize_congruence(structure_matrix([[2]], 5))
        self.assertEqual((fc.k, fc.s, fc.scale), (1, 1, 2))
        self.assertEqual(fc.case_label, CASE_ODD)

    def test_rejects_bad_input(self):
        with self.assertRaises(ValueError):
            diagonalize_congruence(FpMatrix([[1, 2], [3, 0]], 5))
        with self.assertRaises(ValueError):
            diagonalize_congruence(FpMatrix([[1, 1], [1, 1]], 5))

    def test_class_is_congruence_invariant(self):
        rng = random.Random(20161)
        for n, p in ((3, 3), (4, 5), (5, 7), (4, 13)):
            for _ in range(15):
                phi = random_structure_matrix(n, p, rng)
                fc = diagonalize_congruence(phi)
                R = random_block_congruence(n, p, rng)
                other = diagonalize_congruence(R @ phi @ R.T)
                self.assertEqual(
                    (fc.k, fc.s, fc.case_label), (other.k, other.s, other.case_label)
                )

    def test_algebra_isomorphism(self):
        rng = random.Random(8)
        for n, p in ((3, 5), (4, 3), (4, 7)):
            for _ in range(10):
                phi = random_structure_matrix(n, p, rng)
                fc = diagonalize_congruence(phi)
                G = fc.algebra_isomorphism()
                self.assertEqual(rank1_algebra(phi).pushforward(G), fc.algebra())

    def test_classify_algebra_any_basis(self):
        a = rank1_algebra(structure_matrix([[1, 1], [1, 3]], 5))
        P = FpMatrix([[1, 0, 2], [0, 3, 1], [1, 1, 1]], 5)
        fc, G = classify_algebra(a.pushforward(P))
        self.assertEqual(fc.k, 2)
        isomorphism = fc.algebra_isomorphism() @ G
        self.assertEqual(a.pushforward(P).pushforward(isomorphism), fc.algebra())


class ScalingTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(scaling_matrix(1, 1, 4, 5).to_list(), [[2]])
        C = scaling_matrix(2, 1, 3, 5)
        self.assertEqual(C.to_list(), [[2, 2], [3, 2]])
        self.assertEqual(C.T @ C, FpMatrix.identity(2, 5).scale(3))

    def test_odd_rank_needs_square(self):
        with self.assertRaisesMessage(NoScalingExists, "no scaling exists"):
            scaling_matrix(1, 1, 2, 5)

    def test_identity_property(self):
        for p in (3, 5, 7, 13):
            for k in range(1, 6):
                for s in (1, canonical_nonsquare(p)):
                    if k % 2 and s != 1:
                        continue
                    D = normal_form_class(k + 1, k, s, p).active_form
                    for q in range(1, p):
                        try:
                            C = scaling_matrix(k, s, q, p)
                        except NoScalingExists:
                            self.assertEqual(k % 2, 1)
                            continue
                        self.assertEqual(C.T @ D @ C, D.scale(q), (k, s, q, p))

    def test_bad_arguments(self):
        with self.assertRaises(FormError):
            scaling_matrix(2, 1, 0, 5)
        with self.assertRaises(FormError):
            scaling_matrix(2, 4, 1, 5)


class StabilizerTests(SimpleTestCase):
    def test_membership_examples(self):
        fc = normal_form_class(2, 1, 1, 5)
        self.assertIs(stabilizer_membership(fc, FpMatrix.identity(2, 5)), True)
        self.assertIs(stabilizer_membership(fc, FpMatrix.diagonal([4, 1], 5)), True)
        self.assertIs(stabilizer_membership(fc, FpMatrix.diagonal([2, 4], 5)), True)
        self.assertIs(stabilizer_membership(fc, FpMatrix.diagonal([4, 2], 5)), False)
        self.assertIs(stabilizer_membership(fc, FpMatrix([[1, 1], [0, 1]], 5)), False)

    def test_singular(self):
        with self.assertRaises(ValueError):
            stabilizer_membership(
                normal_form_class(2, 1, 1, 5), FpMatrix.zeros(2, 2, 5)
            )

    def test_orders(self):
        self.assertEqual(stabilizer_order(normal_form_class(2, 1, 1, 5)), 20)
        self.assertEqual(stabilizer_order(normal_form_class(3, 1, 1, 3)), 108)
        plus = [fc for fc in case_forms(4, 3) if fc.case_label == CASE_EVEN_PLUS][0]
        self.assertEqual(stabilizer_order(plus), 3888)
        self.assertEqual(
            stabilizer_order(normal_form_class(3, 0, 1, 5)), gl_order(3, 5)
        )

    def test_block_choices_multiply_out(self):
        for n, p in ((2, 5), (3, 3), (4, 3), (4, 7)):
            for fc in case_forms(n, p) + [normal_form_class(n, 0, 1, p)]:
                product = 1
                for row in stabilizer_block_choices(fc):
                    for entry in row:
                        product *= entry
                self.assertEqual(product, stabilizer_order(fc))

    def test_membership_count_matches_order(self):
        for n, p in ((2, 3), (2, 5), (3, 3)):
            for fc in case_forms(n, p):
                count = 0
                for Ps in iter_general_linear(n, p):
                    count += sum(
                        stabilizer_membership(fc, FpMatrix(P, p)) for P in Ps
                    )
                self.assertEqual(count, stabilizer_order(fc), (n, p, fc.case_label))


class CountTests(SimpleTestCase):
    def test_hgs_count(self):
        self.assertEqual(hgs_count(normal_form_class(2, 1, 1, 5)), 24)
        plus = [fc for fc in case_forms(3, 3) if fc.case_label == CASE_EVEN_PLUS][0]
        self.assertEqual(hgs_count(plus), 156)
        self.assertEqual(hgs_count(normal_form_class(4, 0, 1, 3)), 1)

    def test_table_n4(self):
        report = count_table(4, 3)
        self.assertEqual(
            [row.count for row in report.case_rows], [1040, 6240, 3120, 18720]
        )
        self.assertEqual(
            [row.case_label for row in report.case_rows],
            [CASE_ODD, CASE_EVEN_PLUS, CASE_EVEN_MINUS, CASE_ODD],
        )
        self.assertEqual(report.total, 29120)
        self.assertIs(report.exceeds_p9, True)

    def test_table_small(self):
        for n, p, counts in (
            (2, 5, [24]),
            (3, 3, [104, 156, 78]),
            (3, 5, [744, 1860, 1240]),
        ):
            self.assertEqual([row.count for row in count_table(n, p).case_rows], counts)

    def test_count_times_stabilizer(self):
        for n in (2, 3, 4):
            for p in (3, 5, 7, 11):
                for row in count_table(n, p).rows:
                    self.assertEqual(row.count * row.stabilizer_order, gl_order(n, p))

    def test_total_exceeds_p9(self):
        for p in (3, 5, 7):
            self.assertGreater(total_count(4, p), p**9)

    def test_unsupported(self):
        with self.assertRaises(UnsupportedDimension):
            count_table(5, 3)
        with self.assertRaises(UnsupportedDimension):
            closed_form_counts(1, 3)


class CommandTests(SimpleTestCase):
    def write(self, tmp, algebra):
        path = Path(tmp, "algebra.json")
        path.write_text(json.dumps(dump_document(algebra)))
        return str(path)

    def test_classify_normal_form(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self.write(tmp, rank1_algebra(FpMatrix.diagonal([1, 1, 0, 0], 5)))
            out = Path(tmp, "class.json")
            stdout = StringIO()
            call_command("classify", path, out=str(out), stdout=stdout)
            self.assertIn("k=2 case=even-plus s=1", stdout.getvalue())
            self.assertEqual(json.loads(out.read_text())["case"], CASE_EVEN_PLUS)

    def test_classify_zero(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self.write(tmp, rank1_algebra(FpMatrix.zeros(3, 3, 3)))
            stdout = StringIO()
            call_command("classify", path, stdout=stdout)
            self.assertIn("case=zero", stdout.getvalue())

    def test_classify_chain(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self.write(tmp, chain_algebra(3, 5))
            with self.assertRaisesMessage(CommandError, "use chain subcommand") as cm:
                call_command("classify", path, stdout=StringIO())
            self.assertEqual(cm.exception.returncode, 1)

    def test_count(self):
        stdout = StringIO()
        call_command("count", n=2, p=5, stdout=stdout)
        self.assertIn("count       24", stdout.getvalue())

    def test_count_n4(self):
        stdout = StringIO()
        call_command("count", n=4, p=3, stdout=stdout)
        output = stdout.getvalue()
        self.assertIn("total (excluding classical): 29120", output)
        self.assertIn("exceeds p^9 = 19683: yes", output)

    def test_count_verified(self):
        stdout = StringIO()
        call_command("count", "--verify-budget=2e4", n=3, p=3, stdout=stdout)
        output = stdout.getvalue()
        self.assertEqual(output.count("[verified]"), 4)

    def test_count_over_budget(self):
        stdout = StringIO()
        call_command("count", "--verify-budget=100", n=3, p=3, stdout=stdout)
        self.assertEqual(stdout.getvalue().count("[formula only]"), 4)

    def test_count_unsupported(self):
        with self.assertRaises(CommandError) as cm:
            call_command("count", n=6, p=3, stdout=StringIO())
        self.assertEqual(cm.exception.returncode, 1)
