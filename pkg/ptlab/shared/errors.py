"""Exception hierarchy. ValidationError maps to exit code 1, NumericalError to 2."""


class PTLabError(Exception):
    exit_code = 2


# --- Input / contract violations ---

class ValidationError(PTLabError):
    exit_code = 1


class DimensionMismatch(ValidationError):
    pass


class FrameMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class NonSquare(ValidationError):
    pass


class NotPhysical(ValidationError):
    """Observable coefficient array is not Hermitian."""


class StepTooLarge(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


# --- Numerical failures ---

class NumericalError(PTLabError):
    exit_code = 2


class Singular(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class DegenerateBasis(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class PositivityViolation(NumericalError):
    pass
