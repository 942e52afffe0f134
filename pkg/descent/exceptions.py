class DescentError(ValueError):
    pass


class DescentUnavailable(DescentError):
    """tau(A) is not normalized by the translations, so it does not descend directly."""
