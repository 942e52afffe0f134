class BudgetExceeded(ValueError):
    pass


class OracleError(ArithmeticError):
    """A brute-force sweep contradicts itself (orbit times stabilizer, ...)."""
