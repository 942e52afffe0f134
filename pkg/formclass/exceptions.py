class FormError(ValueError):
    pass


class NoScalingExists(FormError):
    pass


class FormulaError(ArithmeticError):
    """A closed-form count disagrees with itself or with the group order."""


class UnsupportedDimension(FormError):
    pass
