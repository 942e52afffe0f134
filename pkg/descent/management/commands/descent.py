from django.core.management.base import BaseCommand, CommandError

from hopfproject.utils import DOMAIN_ERROR, domain_errors, write_output
from nilalg.families import FAMILY_CHAIN, chain_algebra
from nilalg.files import load_algebra

from ...datum import (
    chain_descent_datum,
    descent_datum,
    fixed_points,
    to_document,
)


class Command(BaseCommand):
    help = "Write the descent data of the Hopf algebra attached to an algebra file."

    def add_arguments(self, parser):
        parser.add_argument("path", help="JSON algebra file")
        parser.add_argument("--out", help="Write the descent tables as JSON.")

    def handle(self, *args, **options):
        with domain_errors():
            algebra = load_algebra(options["path"])
            if not algebra.validate().passed:
                raise CommandError(
                    "not a commutative nilpotent algebra; run validate",
                    returncode=DOMAIN_ERROR,
                )
            cube_zero = algebra.cube_is_zero()
            if algebra.family_tag == FAMILY_CHAIN or (
                not cube_zero and algebra == chain_algebra(algebra.n, algebra.p)
            ):
                datum = chain_descent_datum(algebra)
            elif cube_zero:
                datum = descent_datum(algebra)
            else:
                raise CommandError(
                    "A^3 != 0 and not a chain algebra: no descent data available",
                    returncode=DOMAIN_ERROR,
                )

        self.stdout.write(f"source: {datum.source} (n={datum.n}, p={datum.p})")
        self.stdout.write(f"coefficients: {datum.coefficient_constraint}")
        self.stdout.write(f"fixed by every conjugation: {len(fixed_points(datum))}")
        write_output(options["out"], to_document(datum))
