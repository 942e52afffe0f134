class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class NotInvertible(FieldError, ArithmeticError):
    pass


class NoSquareClass(FieldError):
    pass


class ShapeMismatch(FieldError):
    pass
