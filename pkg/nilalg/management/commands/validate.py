from django.core.management.base import BaseCommand, CommandError

from hopfproject.utils import DOMAIN_ERROR, domain_errors, write_output

from ...files import load_algebra


class Command(BaseCommand):
    help = "Check an algebra file for commutativity, associativity and nilpotency."

    def add_arguments(self, parser):
        parser.add_argument("path", help="JSON algebra file")
        parser.add_argument("--out", help="Also write the report as JSON.")

    def handle(self, *args, **options):
        with domain_errors():
            algebra = load_algebra(options["path"])
            report = algebra.validate()
        self.stdout.write(f"algebra: n={algebra.n} p={algebra.p}")
        for line in report.lines():
            self.stdout.write(line)
        doc = report.as_dict()
        if report.passed:
            doc["cube_is_zero"] = algebra.cube_is_zero()
            self.stdout.write(f"A^3 = 0: {'yes' if doc['cube_is_zero'] else 'no'}")
        write_output(options["out"], doc)
        if not report.passed:
            raise CommandError("validation failed", returncode=DOMAIN_ERROR)
        self.stdout.write(self.style.SUCCESS("valid"))
