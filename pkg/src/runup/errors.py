"""Exception hierarchy shared by the compute modules and the CLI."""


class RunupError(Exception):
    """Base class for every error raised by this package."""


class InvalidParametersError(RunupError, ValueError):
    """Scaling or configuration parameters outside their admissible range."""


class DomainError(RunupError, ValueError):
    """A requested abscissa lies outside the data-determined domain."""


class DataError(RunupError, ValueError):
    """Input samples are malformed (NaN, too short, non-monotone grid)."""


class BreakingError(RunupError):
    """The hodograph map is not invertible: the wave breaks.

    ``report`` carries the diagnostic that triggered the error, if any.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(RunupError, ValueError):
    """Solver settings violate a stability or sizing constraint."""


class StabilityError(RunupError):
    """A time-stepping run produced non-finite values."""


class SchemaError(DataError):
    """A CSV file does not match its declared schema.

    ``line`` is the 1-based line number of the offending row, if known.
    """

    def __init__(self, message, path=None, line=None):
        where = f"{path}:{line}: " if path is not None and line is not None else (
            f"{path}: " if path is not None else "")
        super().__init__(where + message)
        self.path = path
        self.line = line
