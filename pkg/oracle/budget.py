from dataclasses import dataclass

from django.conf import settings

from .exceptions import BudgetExceeded


@dataclass(frozen=True)
class EnumerationBudget:
    """
    Limits for one oracle run. Worker w handles the chunks whose index is
    w mod workers, and every reduction is a sum or a union, so results do
    not depend on the worker count.
    """

    max_elements: int
    workers: int = 1
    seed: int = 0
    batch: int = 2**18

    @classmethod
    def from_settings(cls, max_elements=None, workers=None, seed=None, batch=None):
        if max_elements is None:
            max_elements = settings.HOPF_ORACLE_BUDGET
        return cls(
            max_elements=max_elements,
            workers=settings.HOPF_WORKERS if workers is None else workers,
            seed=settings.HOPF_SEED if seed is None else seed,
            batch=settings.HOPF_ORACLE_BATCH if batch is None else batch,
        )

    def require(self, size, what, hint=None):
        if size > self.max_elements:
            message = (
                f"{what} needs {size} elements but the budget is {self.max_elements}"
            )
            if hint:
                message += f"; {hint}"
            raise BudgetExceeded(message)
