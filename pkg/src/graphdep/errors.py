"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operand shapes incompatible with an operation; message names the op."""


class DataError(ValueError):
    """Malformed input data (treebank files, model files, id ranges)."""


class NumericError(ArithmeticError):
    """Non-finite value encountered where a finite one is required."""
