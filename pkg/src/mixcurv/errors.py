"""Exception hierarchy.

Validation problems derive from ``ValueError`` (the CLI maps them to exit
code 2); numerical failures derive from ``ArithmeticError``.
"""


class HermiticityError(ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ShapeMismatchError(ValueError):
    pass


class MatrixFormatError(ValueError):
    pass


class StateValidationError(ValueError):
    """Raised with every violated invariant and its measured residual."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"{name} (residual {res:.3e})" for name, res in self.violations)
        super().__init__(f"invalid state: {lines}")


class PovmValidationError(ValueError):
    pass


class ModelRangeError(ValueError):
    pass


class GridSpecError(ValueError):
    pass


class NumericError(ArithmeticError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class StepUnderflowError(NumericError):
    pass


class SldInconsistencyError(NumericError):
    """The derivative has weight outside the support of the state."""


class DegeneracyError(NumericError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class BranchError(ValueError):
    """A rank-specific formula was called on the wrong rank."""


class RegretError(ValueError):
    pass


class UnsupportedOracleError(ValueError):
    pass
