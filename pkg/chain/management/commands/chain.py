from django.core.management.base import BaseCommand, CommandError

from hopfproject.utils import (
    DOMAIN_ERROR,
    add_run_arguments,
    budget,
    domain_errors,
    positive_int,
    run_options,
    write_output,
)
from oracle.budget import EnumerationBudget

from ...checks import alpha_checks, alpha_subgroup, chain_stabilizer_check
from ...exceptions import ChainCheckFailed
from ...maps import chain_maps


class Command(BaseCommand):
    help = "Build b, b^-1 and alpha for the chain algebra of dimension n; check them."

    def add_arguments(self, parser):
        parser.add_argument("--n", type=positive_int, required=True)
        parser.add_argument("--p", type=int, required=True)
        parser.add_argument(
            "--verify-budget",
            type=budget,
            dest="budget",
            help=(
                "Largest GL_n(F_p) to sweep for the stabilizer "
                "(default: HOPF_ORACLE_BUDGET)."
            ),
        )
        parser.add_argument(
            "--sample",
            type=positive_int,
            help="Check the stabilizer on this many random matrices, not a sweep.",
        )
        add_run_arguments(parser)

    def handle(self, *args, **options):
        n, p = options["n"], options["p"]
        workers, seed = run_options(options)
        oracle_budget = EnumerationBudget.from_settings(
            max_elements=options["budget"], workers=workers, seed=seed
        )
        with domain_errors():
            maps = chain_maps(n, p)
            report = alpha_checks(maps)
            try:
                expected, observed = chain_stabilizer_check(
                    n, p, oracle_budget, sample=options["sample"]
                )
                report.add(
                    "stabilizer",
                    True,
                    f"expected {expected}, observed {observed}"
                    + (" on the automorphisms" if options["sample"] else ""),
                )
            except ChainCheckFailed as e:
                report.add("stabilizer", False, str(e))
            affine = alpha_subgroup(maps)

        for line in report.lines():
            self.stdout.write(line)
        if affine is not None:
            self.stdout.write(
                f"alpha(G) lies in Aff_{n}(F_{p}); A^3 = 0, so classify also applies"
            )

        vectors = maps.vectors
        doc = report.as_dict()
        doc["b"] = maps.b_table.tolist()
        doc["b_inverse"] = vectors[maps.b_inverse_index].tolist()
        doc["alpha"] = maps.alpha_table.tolist()
        doc["affine"] = affine is not None
        write_output(options["out"], doc)
        if not report.passed:
            raise CommandError("chain checks failed", returncode=DOMAIN_ERROR)
        self.stdout.write(self.style.SUCCESS("all checks pass"))
