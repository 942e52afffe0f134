import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from affine.subgroups import is_normalized_by_translations
from fpcore.matrices import FpMatrix
from fpcore.vectors import all_vectors
from nilalg.families import chain_algebra, rank1_algebra
from oracle.budget import EnumerationBudget
from oracle.exceptions import BudgetExceeded

from .checks import (
    alpha_checks,
    alpha_closed_form_mismatches,
    alpha_subgroup,
    chain_automorphisms,
    chain_stabilizer_check,
)
from .exceptions import ChainError, PrimeTooSmall
from .maps import (
    alpha_perm,
    b_closed_form_n3,
    b_inverse,
    b_inverse_closed_form_n3,
    b_map,
    chain_maps,
    xi_power,
)
from .truncated import TruncatedPoly, log_trunc, unit_mul, unit_pow


def z_power(i, n, p):
    return TruncatedPoly.monomial(i, n, p)


class TruncatedPolyTests(SimpleTestCase):
    def test_products(self):
        one_plus_z = TruncatedPoly((1, 1, 0), 5)
        self.assertEqual(unit_mul(one_plus_z, one_plus_z).coefficients, (1, 2, 1))
        u = TruncatedPoly((1, 1, 0, 0), 5)
        v = TruncatedPoly((1, 0, 1, 0), 5)
        self.assertEqual(unit_mul(u, v).coefficients, (1, 1, 1, 1))

    def test_pth_power_is_one(self):
        for p in (5, 7):
            u = TruncatedPoly((1, 1, 0, 0), p)
            self.assertEqual(unit_pow(u, p), TruncatedPoly.one(3, p))
            self.assertEqual(unit_pow(u, 0), TruncatedPoly.one(3, p))

    def test_pow_needs_unit(self):
        with self.assertRaises(ChainError):
            unit_pow(TruncatedPoly((2, 1, 0), 5), 3)

    def test_log(self):
        self.assertEqual(log_trunc(TruncatedPoly.one(3, 5)).coefficients, (0, 0, 0, 0))
        log = log_trunc(TruncatedPoly((1, 1, 0, 0), 5))
        self.assertEqual(log.coefficients, (0, 1, 2, 2))

    def test_log_is_additive(self):
        p = 5
        units = [TruncatedPoly.unit(x, p) for x in all_vectors(3, p)]
        for u in units[::7]:
            for v in units:
                self.assertEqual(
                    log_trunc(unit_mul(u, v)), log_trunc(u) + log_trunc(v)
                )

    def test_log_needs_large_prime(self):
        with self.assertRaisesMessage(PrimeTooSmall, "requires p > n"):
            log_trunc(TruncatedPoly((1, 1, 0, 0), 3))


class ChainMapTests(SimpleTestCase):
    def test_b(self):
        algebra = chain_algebra(3, 5)
        self.assertEqual(b_map(algebra, (0, 0, 0)), (0, 0, 0))
        self.assertEqual(b_map(algebra, (2, 0, 0)), (2, 1, 0))
        self.assertEqual(b_inverse(algebra, (0, 0, 0)), (0, 0, 0))
        self.assertEqual(b_inverse(algebra, (2, 1, 0)), (2, 0, 0))

    def test_inverse_both_ways(self):
        for p in (5, 7):
            maps = chain_maps(3, p)
            vectors = maps.vectors
            np.testing.assert_array_equal(maps.b_inverse_many(maps.b_table), vectors)
            np.testing.assert_array_equal(
                maps.b_many(maps.b_inverse_many(vectors)), vectors
            )

    def test_closed_forms(self):
        for p in (5, 7):
            maps = chain_maps(3, p)
            for v in all_vectors(3, p):
                self.assertEqual(maps.b_map(v), b_closed_form_n3(v, p))
                self.assertEqual(maps.b_inverse(v), b_inverse_closed_form_n3(v, p))

    def test_alpha_closed_form(self):
        self.assertEqual(alpha_closed_form_mismatches(chain_maps(3, 5)), 0)

    def test_alpha(self):
        algebra = chain_algebra(3, 5)
        self.assertIs(alpha_perm(algebra, (0, 0, 0)).is_identity(), True)
        g = alpha_perm(algebra, (1, 2, 3))
        h = alpha_perm(algebra, (4, 0, 1))
        self.assertIs(g.is_bijection(), True)
        self.assertEqual(g @ h, alpha_perm(algebra, (0, 2, 4)))
        self.assertNotEqual(g, h)

    def test_conjugation_rule(self):
        maps = chain_maps(3, 5)
        g, t = (1, 2, 3), (2, 0, 1)
        alpha = maps.alpha_perm(g)
        conjugated = []
        for x in all_vectors(3, 5):
            image = alpha(tuple((c - d) % 5 for c, d in zip(x, t)))
            conjugated.append(tuple((a + b) % 5 for a, b in zip(image, t)))
        target = maps.alpha_perm(maps.conjugation_target(g, t))
        self.assertEqual(conjugated, [target(x) for x in all_vectors(3, 5)])

    def test_xi_power(self):
        algebra = chain_algebra(3, 7)
        for x in ((1, 0, 0), (3, 5, 2), (0, 1, 6)):
            for s in (0, 1, 2, 6, 7, 10):
                self.assertEqual(xi_power(algebra, x, s), algebra.circle_power(x, s))

    def test_requires_large_prime(self):
        with self.assertRaisesMessage(PrimeTooSmall, "requires p > n"):
            chain_maps(3, 3)

    def test_rejects_other_algebras(self):
        with self.assertRaises(ChainError):
            b_map(rank1_algebra(FpMatrix.diagonal([1, 1, 0], 5)), (1, 0, 0))


class AlphaCheckTests(SimpleTestCase):
    def test_all_pass(self):
        for n, p in ((3, 5), (3, 7), (2, 5)):
            report = alpha_checks(chain_maps(n, p))
            self.assertIs(report.passed, True, list(report.lines()))

    def test_accepts_algebra(self):
        report = alpha_checks(chain_algebra(3, 5))
        self.assertIs(report.passed, True)
        with self.assertRaises(ChainError):
            alpha_checks(rank1_algebra(FpMatrix.diagonal([1, 1, 0], 5)))

    def test_affine_only_when_cube_zero(self):
        subgroup = alpha_subgroup(chain_maps(2, 5))
        self.assertIsNotNone(subgroup)
        self.assertIs(is_normalized_by_translations(subgroup), True)
        self.assertIsNone(alpha_subgroup(chain_maps(3, 5)))


class StabilizerCheckTests(SimpleTestCase):
    def budget(self, max_elements=10**7):
        return EnumerationBudget(max_elements=max_elements, batch=2**12)

    def test_automorphisms(self):
        for n, p in ((2, 5), (3, 5)):
            self.assertEqual(len(chain_automorphisms(n, p)), p ** (n - 1) * (p - 1))
        algebra = chain_algebra(3, 5)
        for P in chain_automorphisms(3, 5)[::9]:
            self.assertEqual(algebra.pushforward(FpMatrix(P, 5)), algebra)

    def test_n2(self):
        self.assertEqual(chain_stabilizer_check(2, 5, self.budget()), (20, 20))
        self.assertEqual(chain_stabilizer_check(2, 7, self.budget()), (42, 42))

    def test_over_budget(self):
        with self.assertRaisesMessage(BudgetExceeded, "use sampling mode"):
            chain_stabilizer_check(3, 5, self.budget(max_elements=1000))

    def test_sampling_mode(self):
        self.assertEqual(
            chain_stabilizer_check(3, 5, self.budget(max_elements=1000), sample=2000),
            (100, 100),
        )

    @tag("slow")
    def test_n3_sweep(self):
        self.assertEqual(chain_stabilizer_check(3, 5), (100, 100))


class CommandTests(SimpleTestCase):
    def test_n3_sampled(self):
        stdout = StringIO()
        call_command("chain", "--n=3", "--p=5", "--sample=500", stdout=stdout)
        output = stdout.getvalue()
        self.assertIn("stabilizer: pass (expected 100, observed 100", output)
        self.assertIn("all checks pass", output)
        self.assertNotIn("classify also applies", output)

    def test_n2(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp, "chain.json")
            stdout = StringIO()
            call_command("chain", "--n=2", "--p=5", "--out", str(out), stdout=stdout)
            self.assertIn("classify also applies", stdout.getvalue())
            doc = json.loads(out.read_text())
        self.assertIs(doc["passed"], True)
        self.assertIs(doc["affine"], True)
        self.assertEqual(len(doc["b"]), 25)
        self.assertEqual(doc["b"][0], [0, 0])

    def test_small_prime(self):
        with self.assertRaisesMessage(CommandError, "requires p > n") as cm:
            call_command("chain", "--n=3", "--p=3", stdout=StringIO())
        self.assertEqual(cm.exception.returncode, 1)

    def test_budget_hint(self):
        with self.assertRaisesMessage(CommandError, "use sampling mode"):
            call_command(
                "chain", "--n=3", "--p=5", "--verify-budget=1e3", stdout=StringIO()
            )
