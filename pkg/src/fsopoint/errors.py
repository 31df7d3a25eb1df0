"""Exception hierarchy shared by all modules.

The CLI maps each family onto an exit status: parameter and config problems
exit 2, data problems exit 3, numerical divergence exits 4.
"""


class FsoPointError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class InvalidParameterError(FsoPointError, ValueError):
    exit_code = 2


class UnsupportedConfigurationError(FsoPointError, ValueError):
    exit_code = 2


class ConfigError(FsoPointError):
    """Raised with every invalid field collected, not just the first."""

    exit_code = 2

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InsufficientDataError(FsoPointError):
    exit_code = 3


class CalibrationError(FsoPointError):
    exit_code = 3


class SchemaError(FsoPointError):
    exit_code = 3


class IntegrationError(FsoPointError, ArithmeticError):
    exit_code = 4

    def __init__(self, message, t=None):
        self.t = t
        super().__init__(message)


class DivergenceError(IntegrationError):
    pass
