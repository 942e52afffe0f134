from django.core.management.base import BaseCommand, CommandError

from affine.subgroups import build_subgroup
from fpcore.orders import gl_order
from hopfproject.utils import (
    DOMAIN_ERROR,
    add_run_arguments,
    budget,
    domain_errors,
    run_options,
    write_output,
)
from oracle.budget import EnumerationBudget
from oracle.sweeps import stabilizer_size

from ...counting import FORMULA_ONLY, MISMATCH, VERIFIED, count_table
from ...forms import normal_form_class


class Command(BaseCommand):
    help = "Closed-form counts of rank-one Hopf Galois structures for n = 2, 3, 4."

    def add_arguments(self, parser):
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument(
            "--verify-budget",
            type=budget,
            dest="budget",
            help="Check each row with the oracle when |GL_n(F_p)| fits the budget.",
        )
        add_run_arguments(parser)

    def handle(self, *args, **options):
        n, p = options["n"], options["p"]
        with domain_errors():
            report = count_table(n, p)
            if options["budget"] is not None:
                self.verify(report, options)

        width = max(len(row.descriptor) for row in report.rows)
        for row in report.rows:
            line = (
                f"{row.descriptor:<{width}}  stabilizer {row.stabilizer_order:>10}"
                f"  count {row.count:>8}"
            )
            if options["budget"] is not None:
                line += f"  [{row.status}]"
            self.stdout.write(line)
        self.stdout.write(f"total (excluding classical): {report.total}")
        if n == 4:
            self.stdout.write(
                f"exceeds p^9 = {p**9}: {'yes' if report.exceeds_p9 else 'no'}"
            )
        write_output(options["out"], report.as_dict())
        if any(row.status == MISMATCH for row in report.rows):
            raise CommandError("oracle and formula disagree", returncode=DOMAIN_ERROR)

    def verify(self, report, options):
        workers, seed = run_options(options)
        oracle_budget = EnumerationBudget.from_settings(
            max_elements=options["budget"], workers=workers, seed=seed
        )
        fits = gl_order(report.n, report.p) <= oracle_budget.max_elements
        for row in report.rows:
            if not fits:
                row.status = FORMULA_ONLY
                continue
            subgroup = build_subgroup(
                normal_form_class(report.n, row.k, row.s, report.p).algebra()
            )
            if subgroup.is_translation_group():
                # Every (P, 0) normalizes the translations.
                row.oracle_stabilizer = gl_order(report.n, report.p)
            else:
                row.oracle_stabilizer = stabilizer_size(subgroup, oracle_budget)
            row.status = (
                VERIFIED if row.oracle_stabilizer == row.stabilizer_order else MISMATCH
            )
