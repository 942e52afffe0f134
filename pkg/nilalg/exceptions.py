class AlgebraError(ValueError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class StructureMatrixError(AlgebraError):
    pass


class NotNilpotent(AlgebraError):
    pass
