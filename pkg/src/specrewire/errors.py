class ValidationError(ValueError):
    """Input violates a documented precondition."""


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(ArithmeticError):
    """A numerical routine failed (non-convergence, NaN, divergence)."""
