"""Exception hierarchy; the CLI maps each class to an exit code."""


class QmomError(Exception):
    pass


class ValidationError(QmomError, ValueError):
    """Inputs violate a documented precondition."""


class DegenerateEnsembleError(QmomError, ArithmeticError):
    """No interaction channel acts on the chosen space, so mu2 = 0."""


class DimensionCapError(QmomError, MemoryError):
    """An explicit many-body construction would exceed the dimension cap."""

    def __init__(self, dimension: int, cap: int, what: str = "space"):
        self.dimension = dimension
        self.cap = cap
        super().__init__(
            f"{what} dimension {dimension} exceeds the cap {cap} "
            "(raise it with QMOM_DIM_CAP or dim_cap=...)"
        )
