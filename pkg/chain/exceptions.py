class ChainError(ValueError):
    pass


class PrimeTooSmall(ChainError):
    """The logarithm and the exponent law (1 + z^i)^p = 1 need p > n."""


class ChainCheckFailed(ArithmeticError):
    pass
