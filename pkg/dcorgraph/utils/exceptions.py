"""
Custom Exceptions
=================

Exception hierarchy shared by the library and the command line front end.
Each exception carries a machine-readable error code and the process exit
code the CLI should use when it escapes a subcommand.
"""

from typing import Optional

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class GraphLearnError(Exception):
    """Base class for all dcorgraph errors"""

    exit_code: int = EXIT_DATA
    default_error_code: str = "GRAPH_LEARN_ERROR"

    def __init__(self, detail: str, error_code: Optional[str] = None):
        super().__init__(detail)
        self.detail = detail
        self.error_code = error_code or self.default_error_code

    def one_line(self) -> str:
        """
        Render the error as a single machine-parsable line.

        Returns:
            Line of the form ``error code=... type=... detail="..."``
        """
        detail = " ".join(self.detail.split()).replace('"', "'")
        return f'error code={self.error_code} type={self.__class__.__name__} detail="{detail}"'


class ConfigurationError(GraphLearnError):
    """Invalid configuration or command line combination"""

    exit_code = EXIT_USAGE
    default_error_code = "CONFIG_ERROR"


class InvalidInputError(GraphLearnError):
    """Input values violate a documented precondition"""

    default_error_code = "INVALID_INPUT"


class DataFormatError(GraphLearnError):
    """A file could not be parsed into a numeric table"""

    default_error_code = "DATA_FORMAT"


class DimensionMismatchError(GraphLearnError):
    """Two inputs that must share a size do not"""

    default_error_code = "DIMENSION_MISMATCH"


class SingularMatrixError(GraphLearnError):
    """Matrix could not be inverted even after the ridge fallback"""

    exit_code = EXIT_NUMERICAL
    default_error_code = "SINGULAR_MATRIX"

    def __init__(self, detail: str, smallest_pivot: float = 0.0):
        super().__init__(detail)
        self.smallest_pivot = smallest_pivot


class ConsistencyError(GraphLearnError):
    """An internal numerical invariant was broken"""

    exit_code = EXIT_NUMERICAL
    default_error_code = "CONSISTENCY"
