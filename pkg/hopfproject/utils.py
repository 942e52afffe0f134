"""
Helpers shared by the management commands: common flags, exit codes and
the JSON written by --out.
"""

import argparse
import json
from contextlib import contextmanager

from django.conf import settings
from django.core.management.base import CommandError

from nilalg.files import AlgebraFileError

DOMAIN_ERROR = 1
INPUT_ERROR = 2


def budget(value):
    """Parse budgets written either as integers or as '2e4'."""
    try:
        parsed = int(float(value))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid budget {value!r}")
    if parsed < 0:
        raise argparse.ArgumentTypeError("budget must be non-negative")
    return parsed


def positive_int(value):
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {value!r}")
    if parsed < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, not {value}")
    return parsed


def add_run_arguments(parser):
    parser.add_argument(
        "--workers",
        type=positive_int,
        help="Worker processes for brute-force sweeps (default: HOPF_WORKERS).",
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="Seed for randomised checks (default: HOPF_SEED).",
    )
    parser.add_argument("--out", help="Also write the result as JSON to this file.")


def run_options(options):
    workers = options.get("workers") or settings.HOPF_WORKERS
    seed = options.get("seed")
    return workers, settings.HOPF_SEED if seed is None else seed


@contextmanager
def domain_errors():
    """
    Map failures to exit codes: 2 for unreadable or malformed input, 1 for
    mathematical preconditions that do not hold.
    """
    try:
        yield
    except AlgebraFileError as e:
        raise CommandError(str(e), returncode=INPUT_ERROR) from e
    except OSError as e:
        raise CommandError(str(e), returncode=INPUT_ERROR) from e
    except (ValueError, ArithmeticError) as e:
        raise CommandError(str(e), returncode=DOMAIN_ERROR) from e


def write_output(path, document):
    if not path:
        return
    try:
        with open(path, "w") as handle:
            json.dump(document, handle, indent=1)
            handle.write("\n")
    except OSError as e:
        raise CommandError(f"cannot write {path}: {e.strerror}", returncode=2) from e
