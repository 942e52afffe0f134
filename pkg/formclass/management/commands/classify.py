from django.core.management.base import BaseCommand, CommandError

from hopfproject.utils import DOMAIN_ERROR, domain_errors, write_output
from nilalg.files import load_algebra

from ...counting import hgs_count
from ...forms import classify_algebra
from ...stabilizers import stabilizer_order


class Command(BaseCommand):
    help = "Normal form, case and structure count of an algebra with A^3 = 0."

    def add_arguments(self, parser):
        parser.add_argument("path", help="JSON algebra file")
        parser.add_argument("--out", help="Also write the class as JSON.")

    def handle(self, *args, **options):
        with domain_errors():
            algebra = load_algebra(options["path"])
            if not algebra.validate().passed:
                raise CommandError(
                    "not a commutative nilpotent algebra; run validate",
                    returncode=DOMAIN_ERROR,
                )
            if not algebra.cube_is_zero():
                raise CommandError(
                    "A^3 != 0; use chain subcommand", returncode=DOMAIN_ERROR
                )
            square_dim = algebra.square_dim()
            if square_dim > 1:
                raise CommandError(
                    f"dim(A^2) = {square_dim} > 1 has no closed-form classification",
                    returncode=DOMAIN_ERROR,
                )
            fc, G = classify_algebra(algebra)
            isomorphism = fc.algebra_isomorphism() @ G

        doc = fc.as_dict()
        doc["algebra_isomorphism"] = isomorphism.to_list()
        doc["stabilizer_order"] = stabilizer_order(fc)
        doc["count"] = hgs_count(fc)
        self.stdout.write(f"n={fc.n} p={fc.p}")
        self.stdout.write(f"k={fc.k} case={fc.case_label} s={fc.s}")
        if fc.scale != 1:
            self.stdout.write(f"scale={fc.scale}")
        self.stdout.write(f"change of basis: {fc.change_of_basis.to_list()}")
        self.stdout.write(f"normal form: {fc.normal_form.to_list()}")
        self.stdout.write(f"stabilizer order: {doc['stabilizer_order']}")
        self.stdout.write(f"Hopf Galois structures of this type: {doc['count']}")
        write_output(options["out"], doc)
