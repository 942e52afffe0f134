import argparse
import json
import tempfile
from pathlib import Path

from django.core.management.base import CommandError
from django.test import SimpleTestCase

from fpcore.exceptions import NotPrime
from nilalg.files import AlgebraFileError

from .utils import budget, domain_errors, positive_int, run_options, write_output


class ArgumentTests(SimpleTestCase):
    def test_budget(self):
        self.assertEqual(budget("2e4"), 20000)
        self.assertEqual(budget("150"), 150)
        for value in ("lots", "-1"):
            with self.assertRaises(argparse.ArgumentTypeError):
                budget(value)

    def test_positive_int(self):
        self.assertEqual(positive_int("3"), 3)
        with self.assertRaises(argparse.ArgumentTypeError):
            positive_int("0")

    def test_run_options(self):
        with self.settings(HOPF_WORKERS=2, HOPF_SEED=7):
            self.assertEqual(run_options({"workers": None, "seed": None}), (2, 7))
            self.assertEqual(run_options({"workers": 3, "seed": 0}), (3, 0))


class DomainErrorTests(SimpleTestCase):
    def check(self, exception, returncode):
        with self.assertRaises(CommandError) as cm:
            with domain_errors():
                raise exception
        self.assertEqual(cm.exception.returncode, returncode)

    def test_exit_codes(self):
        self.check(AlgebraFileError("bad", "$.p"), 2)
        self.check(FileNotFoundError("missing"), 2)
        self.check(NotPrime("p must be an odd prime"), 1)
        self.check(ArithmeticError("mismatch"), 1)

    def test_other_errors_pass_through(self):
        with self.assertRaises(KeyError):
            with domain_errors():
                raise KeyError("x")


class OutputTests(SimpleTestCase):
    def test_write_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "out.json")
            write_output(str(path), {"p": 5})
            self.assertEqual(json.loads(path.read_text()), {"p": 5})
            write_output(None, {"p": 5})

    def test_unwritable(self):
        with self.assertRaises(CommandError) as cm:
            write_output("/nonexistent/dir/out.json", {})
        self.assertEqual(cm.exception.returncode, 2)
