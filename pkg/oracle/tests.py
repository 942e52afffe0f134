import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from affine.subgroups import build_subgroup
from formclass.counting import case_forms, hgs_count
from formclass.forms import normal_form_class
from formclass.stabilizers import stabilizer_membership, stabilizer_order
from fpcore.matrices import FpMatrix
from fpcore.orders import CASE_EVEN_MINUS, form_type, gl_order, go_order
from nilalg.families import rank1_algebra, zero_algebra
from nilalg.files import dump_document

from .budget import EnumerationBudget
from .enumeration import iter_general_linear
from .exceptions import BudgetExceeded
from .sweeps import (
    ORBIT_ENUMERATE,
    ORBIT_STABILIZER,
    count_algebra_structures,
    form_equivalence_search,
    orbit,
    orbit_size,
    orthogonal_count,
    stabilizer_elements,
    stabilizer_size,
)


def budget(max_elements=10**7, workers=1):
    return EnumerationBudget(max_elements=max_elements, workers=workers, batch=2**12)


def subgroup_of(fc):
    return build_subgroup(fc.algebra())


class EnumerationTests(SimpleTestCase):
    def test_sizes_and_invertibility(self):
        for n, p in ((1, 3), (2, 3), (2, 5), (3, 3)):
            stacks = list(iter_general_linear(n, p, batch=500))
            matrices = np.concatenate(stacks)
            self.assertEqual(len(matrices), gl_order(n, p))
            keys = {m.tobytes() for m in matrices}
            self.assertEqual(len(keys), gl_order(n, p))
            for m in matrices[:: max(1, len(matrices) // 200)]:
                self.assertIs(FpMatrix(m, p).is_invertible(), True)

    def test_worker_partition(self):
        whole = np.concatenate(list(iter_general_linear(3, 3, batch=300)))
        shares = [
            np.concatenate(list(iter_general_linear(3, 3, w, 3, batch=300)))
            for w in range(3)
        ]
        self.assertEqual(sum(len(s) for s in shares), len(whole))
        self.assertEqual(
            {m.tobytes() for s in shares for m in s}, {m.tobytes() for m in whole}
        )


class OrbitTests(SimpleTestCase):
    def test_classical_structure(self):
        for n, p in ((2, 3), (3, 3)):
            subgroup = build_subgroup(zero_algebra(n, p))
            self.assertEqual(orbit_size(subgroup, budget()), 1)

    def test_n2(self):
        for p in (3, 5, 7):
            t = build_subgroup(rank1_algebra(FpMatrix.diagonal([1, 0], p)))
            self.assertEqual(orbit_size(t, budget()), p**2 - 1)

    def test_n3_p3(self):
        sizes = [orbit_size(subgroup_of(fc), budget()) for fc in case_forms(3, 3)]
        self.assertEqual(sizes, [104, 156, 78])

    def test_orbit_stabilizer(self):
        for fc in case_forms(3, 3):
            result = orbit(subgroup_of(fc), budget(), ORBIT_ENUMERATE)
            self.assertEqual(result.size * result.stabilizer, gl_order(3, 3))
            self.assertEqual(result.size, hgs_count(fc))

    def test_methods_agree(self):
        t = subgroup_of(normal_form_class(3, 1, 1, 3))
        self.assertEqual(
            orbit_size(t, budget(), ORBIT_ENUMERATE),
            orbit_size(t, budget(), ORBIT_STABILIZER),
        )

    def test_budget(self):
        t = subgroup_of(normal_form_class(3, 1, 1, 3))
        with self.assertRaisesMessage(BudgetExceeded, "stabilizer method"):
            orbit_size(t, budget(max_elements=1000), ORBIT_ENUMERATE)

    def test_workers(self):
        t = subgroup_of(normal_form_class(3, 2, 1, 3))
        self.assertEqual(
            orbit(t, budget(workers=1), ORBIT_ENUMERATE),
            orbit(t, budget(workers=4), ORBIT_ENUMERATE),
        )
        self.assertEqual(
            stabilizer_size(t, budget(workers=1)), stabilizer_size(t, budget(workers=4))
        )


class StabilizerTests(SimpleTestCase):
    def test_examples(self):
        odd = subgroup_of(normal_form_class(2, 1, 1, 5))
        self.assertEqual(stabilizer_size(odd, budget()), 20)
        minus = [fc for fc in case_forms(3, 3) if fc.case_label == CASE_EVEN_MINUS][0]
        self.assertEqual(stabilizer_size(subgroup_of(minus), budget()), 144)

    def test_elements_satisfy_block_equations(self):
        for fc in case_forms(3, 3):
            elements = stabilizer_elements(subgroup_of(fc), budget())
            self.assertEqual(len(elements), stabilizer_order(fc))
            for P in elements:
                self.assertIs(stabilizer_membership(fc, FpMatrix(P, 3)), True)

    def test_matches_formula(self):
        for n, p in ((2, 3), (2, 5), (2, 7), (3, 3)):
            for fc in case_forms(n, p):
                self.assertEqual(
                    stabilizer_size(subgroup_of(fc), budget()), stabilizer_order(fc)
                )


class OrthogonalTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(orthogonal_count(1, 7, 1), 2)
        self.assertEqual(orthogonal_count(2, 5, 1), 8)
        self.assertEqual(orthogonal_count(2, 5, 2), 12)

    def test_matches_go_order(self):
        for p, nonsquare in ((3, 2), (5, 2), (7, 3)):
            for k in (1, 2, 3):
                for s in (1, nonsquare) if k % 2 == 0 else (1,):
                    self.assertEqual(
                        orthogonal_count(k, p, s), go_order(k, p, form_type(k, s, p))
                    )

    def test_rank4_p3(self):
        for s in (1, 2):
            expected = go_order(4, 3, form_type(4, s, 3))
            self.assertEqual(orthogonal_count(4, 3, s), expected)

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            orthogonal_count(3, 7, 1, budget(max_elements=100))


class EquivalenceTests(SimpleTestCase):
    def phi(self, block, p):
        m = len(block)
        phi = np.zeros((m + 1, m + 1), dtype=np.int64)
        phi[:m, :m] = block
        return FpMatrix(phi, p)

    def test_same_form(self):
        phi = self.phi([[1, 0], [0, 1]], 5)
        self.assertEqual(form_equivalence_search(phi, phi, 5), FpMatrix.identity(3, 5))

    def test_hyperbolic_plane(self):
        source = self.phi([[0, 1], [1, 0]], 5)
        target = self.phi([[1, 0], [0, 1]], 5)
        P = form_equivalence_search(source, target, 5)
        self.assertIsNotNone(P)
        self.assertEqual(P @ source @ P.T, target)
        self.assertEqual(P.entries[-1].tolist(), [0, 0, 1])

    def test_inequivalent(self):
        for p in (3, 5, 7):
            nonsquare = 2 if p != 7 else 3
            identity = self.phi([[1, 0], [0, 1]], p)
            twisted = self.phi([[1, 0], [0, nonsquare]], p)
            self.assertIsNone(form_equivalence_search(identity, twisted, p))


class StructureCountTests(SimpleTestCase):
    def test_n2(self):
        for p in (3, 5):
            result = count_algebra_structures(2, p, budget())
            self.assertEqual(result.candidates, p**6)
            self.assertEqual(result.nilpotent, p**2)
            self.assertEqual(result.cube_zero, p**2)

    def test_n3_is_out_of_budget(self):
        with self.assertRaises(BudgetExceeded):
            count_algebra_structures(3, 3, budget())


class CommandTests(SimpleTestCase):
    def test_go(self):
        stdout = StringIO()
        call_command("oracle", "go", "--k=2", "--p=5", "--s=2", stdout=stdout)
        self.assertIn("brute force: 12", stdout.getvalue())

    def test_go_bad_s(self):
        with self.assertRaises(CommandError) as cm:
            call_command("oracle", "go", "--k=2", "--p=5", "--s=4", stdout=StringIO())
        self.assertEqual(cm.exception.returncode, 1)

    def test_orbit(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "algebra.json")
            algebra = rank1_algebra(FpMatrix.diagonal([1, 0], 5))
            path.write_text(json.dumps(dump_document(algebra)))
            out = Path(tmp, "orbit.json")
            stdout = StringIO()
            call_command("oracle", "--out", str(out), "orbit", str(path), stdout=stdout)
            self.assertIn("orbit size: 24", stdout.getvalue())
            doc = json.loads(out.read_text())
            self.assertEqual((doc["orbit"], doc["formula"]), (24, 24))

    def test_orbit_over_budget(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "algebra.json")
            path.write_text(json.dumps({"p": 3, "n": 3, "family": "chain"}))
            with self.assertRaises(CommandError) as cm:
                call_command(
                    "oracle",
                    "--verify-budget=100",
                    "stabilizer",
                    str(path),
                    stdout=StringIO(),
                )
            self.assertEqual(cm.exception.returncode, 1)

    def test_structures(self):
        stdout = StringIO()
        call_command("oracle", "structures", "--n=2", "--p=3", stdout=stdout)
        self.assertIn("nilpotent algebras: 9", stdout.getvalue())

    def test_equivalence(self):
        with tempfile.TemporaryDirectory() as tmp:
            paths = []
            hyperbolic = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
            identity = [[1, 0, 0], [0, 1, 0], [0, 0, 0]]
            for name, matrix in (("a", hyperbolic), ("b", identity)):
                path = Path(tmp, f"{name}.json")
                doc = {"p": 5, "n": 3, "family": "rank1", "matrix": matrix}
                path.write_text(json.dumps(doc))
                paths.append(str(path))
            stdout = StringIO()
            call_command("oracle", "equivalence", *paths, stdout=stdout)
            self.assertIn("congruent via", stdout.getvalue())


@tag("slow")
class DeskScaleTests(SimpleTestCase):
    """GL_4(F_3) and GL_3(F_5) sweeps."""

    def test_n4_p3_stabilizers(self):
        sweep = EnumerationBudget.from_settings()
        counts = []
        for fc in case_forms(4, 3):
            self.assertEqual(
                stabilizer_size(subgroup_of(fc), sweep), stabilizer_order(fc)
            )
            counts.append(orbit_size(subgroup_of(fc), sweep, ORBIT_STABILIZER))
        self.assertEqual(counts, [1040, 6240, 3120, 18720])
        self.assertGreater(sum(counts), 3**9)

    def test_n3_p5_counts(self):
        sweep = EnumerationBudget.from_settings()
        counts = [
            orbit_size(subgroup_of(fc), sweep, ORBIT_STABILIZER)
            for fc in case_forms(3, 5)
        ]
        self.assertEqual(counts, [744, 1860, 1240])

    def test_n4_k3_stabilizer(self):
        fc = normal_form_class(4, 3, 1, 3)
        sweep = EnumerationBudget.from_settings()
        self.assertEqual(stabilizer_size(subgroup_of(fc), sweep), 1296)
