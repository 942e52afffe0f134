"""
Brute-force checks of the closed-form theory:

    oracle orbit ALGEBRA [--method auto|enumerate|stabilizer]
    oracle stabilizer ALGEBRA
    oracle go --k K --p P [--s S]
    oracle equivalence ALGEBRA ALGEBRA
    oracle structures --n N --p P
"""

from django.core.management.base import BaseCommand, CommandError

from affine.subgroups import build_subgroup
from formclass.counting import hgs_count
from formclass.forms import classify_algebra
from fpcore.field import canonical_nonsquare
from fpcore.orders import form_type, gl_order, go_order
from hopfproject.utils import (
    DOMAIN_ERROR,
    add_run_arguments,
    budget,
    domain_errors,
    run_options,
    write_output,
)
from nilalg.families import FAMILY_RANK1
from nilalg.files import load_algebra

from ...budget import EnumerationBudget
from ...sweeps import (
    ORBIT_AUTO,
    ORBIT_ENUMERATE,
    ORBIT_STABILIZER,
    count_algebra_structures,
    form_equivalence_search,
    orbit,
    orthogonal_count,
    stabilizer_size,
)


class Command(BaseCommand):
    help = "Brute-force orbits, stabilizers and orthogonal group orders."

    def add_arguments(self, parser):
        add_run_arguments(parser)
        parser.add_argument(
            "--verify-budget",
            type=budget,
            dest="budget",
            help="Largest group to enumerate (default: HOPF_ORACLE_BUDGET).",
        )
        actions = parser.add_subparsers(dest="action", required=True)

        orbit_parser = actions.add_parser("orbit", help="Conjugation orbit size.")
        orbit_parser.add_argument("path")
        orbit_parser.add_argument(
            "--method",
            choices=[ORBIT_AUTO, ORBIT_ENUMERATE, ORBIT_STABILIZER],
            default=ORBIT_AUTO,
        )

        stabilizer_parser = actions.add_parser("stabilizer", help="Stabilizer order.")
        stabilizer_parser.add_argument("path")

        go_parser = actions.add_parser("go", help="Order of an orthogonal group.")
        go_parser.add_argument("--k", type=int, required=True)
        go_parser.add_argument("--p", type=int, required=True)
        go_parser.add_argument(
            "--s", type=int, help="Last diagonal entry (default 1)."
        )

        equivalence_parser = actions.add_parser(
            "equivalence", help="Search for a congruence between two rank1 files."
        )
        equivalence_parser.add_argument("first")
        equivalence_parser.add_argument("second")

        structures_parser = actions.add_parser(
            "structures", help="Count nilpotent algebra structures on F_p^n."
        )
        structures_parser.add_argument("--n", type=int, required=True)
        structures_parser.add_argument("--p", type=int, required=True)

    def handle(self, *args, **options):
        workers, seed = run_options(options)
        self.budget = EnumerationBudget.from_settings(
            max_elements=options["budget"], workers=workers, seed=seed
        )
        handler = getattr(self, "handle_%s" % options["action"])
        with domain_errors():
            doc = handler(options)
        write_output(options["out"], doc)

    def handle_orbit(self, options):
        algebra = load_algebra(options["path"])
        result = orbit(build_subgroup(algebra), self.budget, options["method"])
        order = gl_order(algebra.n, algebra.p)
        self.stdout.write(f"orbit size: {result.size} ({result.method})")
        self.stdout.write(f"stabilizer: {result.stabilizer}")
        self.stdout.write(f"|GL_{algebra.n}(F_{algebra.p})| = {order}")
        doc = {
            "p": algebra.p,
            "n": algebra.n,
            "orbit": result.size,
            "stabilizer": result.stabilizer,
            "method": result.method,
        }
        if algebra.cube_is_zero() and algebra.square_dim() <= 1:
            fc, _ = classify_algebra(algebra)
            doc["formula"] = hgs_count(fc)
            agree = doc["formula"] == result.size
            if agree:
                verdict = self.style.SUCCESS("(agrees)")
            else:
                verdict = self.style.ERROR("(DIFFERS)")
            self.stdout.write(f"formula: {doc['formula']} {verdict}")
            if not agree:
                write_output(options["out"], doc)
                raise CommandError(
                    "oracle and formula disagree", returncode=DOMAIN_ERROR
                )
        return doc

    def handle_stabilizer(self, options):
        algebra = load_algebra(options["path"])
        size = stabilizer_size(build_subgroup(algebra), self.budget)
        self.stdout.write(f"stabilizer: {size}")
        return {"p": algebra.p, "n": algebra.n, "stabilizer": size}

    def handle_go(self, options):
        k, p = options["k"], options["p"]
        s = 1 if options["s"] is None else options["s"] % p
        if s not in (1, canonical_nonsquare(p)):
            raise CommandError(
                f"--s must be 1 or {canonical_nonsquare(p)}", returncode=DOMAIN_ERROR
            )
        label = form_type(k, s, p)
        count = orthogonal_count(k, p, s, self.budget)
        expected = go_order(k, p, label)
        self.stdout.write(f"|GO_{k}| ({label}, s={s}) brute force: {count}")
        self.stdout.write(f"formula: {expected}")
        if count != expected:
            raise CommandError(
                "orthogonal group order mismatch", returncode=DOMAIN_ERROR
            )
        return {
            "k": k,
            "p": p,
            "s": s,
            "case": label,
            "count": count,
            "formula": expected,
        }

    def handle_equivalence(self, options):
        first = load_algebra(options["first"])
        second = load_algebra(options["second"])
        for algebra in (first, second):
            if algebra.family_tag != FAMILY_RANK1:
                raise CommandError(
                    "equivalence compares rank1 algebra files", returncode=DOMAIN_ERROR
                )
        if (first.n, first.p) != (second.n, second.p):
            raise CommandError("the files differ in n or p", returncode=DOMAIN_ERROR)
        P = form_equivalence_search(
            first.family[1], second.family[1], first.p, self.budget
        )
        if P is None:
            self.stdout.write("not congruent")
        else:
            self.stdout.write(f"congruent via P = {P.to_list()}")
        return {
            "p": first.p,
            "n": first.n,
            "congruent": P is not None,
            "P": None if P is None else P.to_list(),
        }

    def handle_structures(self, options):
        result = count_algebra_structures(options["n"], options["p"], self.budget)
        self.stdout.write(f"commutative tensors: {result.candidates}")
        self.stdout.write(f"nilpotent algebras: {result.nilpotent}")
        self.stdout.write(f"with A^3 = 0: {result.cube_zero}")
        return {
            "n": result.n,
            "p": result.p,
            "candidates": result.candidates,
            "nilpotent": result.nilpotent,
            "cube_zero": result.cube_zero,
        }
