"""
Exception hierarchy shared by every package.

Validation problems (bad files, wrong shapes, broken invariants) and numerical
failures are kept apart so the command line can map them to distinct exit codes.
"""

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class SynthesisError(Exception):
    """Base class for all errors raised by the toolkit."""


class ValidationError(SynthesisError):
    """An input violates a documented invariant."""


class ParseError(ValidationError):
    """A scenario or report file could not be parsed."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class DimensionMismatch(ValidationError):
    pass


class NonUnitary(ValidationError):
    pass


class NotSymplectic(ValidationError):
    pass


class InvalidFactor(ValidationError):
    pass


class PlanMismatch(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass


class InsufficientSamples(ValidationError):
    pass


class NumericalFailure(SynthesisError):
    """A computation could not be carried out to the required accuracy."""


class NumericalBreakdown(NumericalFailure):
    pass


class FitnessEvaluationFailure(NumericalFailure):
    """A parameter point cannot be scored; the optimizer treats it as +inf."""


class SingularElimination(FitnessEvaluationFailure):
    pass


def exit_code_for(error):
    """
    Map an exception to the process exit code.

    Args:
        error: The exception raised by a command

    Returns:
        2 for validation errors, 3 for numerical failures, 1 otherwise
    """
    if isinstance(error, ValidationError):
        return EXIT_VALIDATION
    if isinstance(error, NumericalFailure):
        return EXIT_NUMERICAL
    return EXIT_UNEXPECTED
