"""Exception types raised across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters, mismatched dimensions or a malformed config."""


class NumericDomainError(ValueError):
    """A numeric input lies outside the domain of an operation."""


class CapacityError(RuntimeError):
    """An exhaustive computation would exceed its size limit."""


class InfeasibleError(ValueError):
    """A cover threshold cannot be reached by any subset."""


class CsvParseError(ValueError):
    """Malformed vector CSV file."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line
