"""
Exception hierarchy shared by every module.

Each error carries the process exit code the CLI uses when it reaches the top level.
"""
from typing import Optional, Sequence


class DominationError(ValueError):
    """Base class for all errors raised by this package."""
    exit_code = 1


class InvalidInputError(DominationError):
    """Malformed instance, out-of-range vertex id or mismatched solution shape."""


class ParseError(InvalidInputError):
    """Input file does not follow its format."""
    exit_code = 2

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DecompositionError(InvalidInputError):
    """A tree decomposition failed validation."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class InvalidSplitError(InvalidInputError):
    """Separator conditions A∪C=V, A∩C=B, no A\\B–C\\B edges do not hold."""


class PreconditionError(InvalidInputError):
    """An algorithm was called outside its precondition."""


class SolverBudgetError(DominationError):
    """The exact solver refuses an instance larger than its budget."""

    def __init__(self, message: str, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(message)


class NoSuchNodeError(DominationError):
    """No decomposition node satisfies the requested window."""


class ContractViolationError(DominationError):
    """An oracle query exceeded the size cap or an answer failed verification."""
    exit_code = 3

    def __init__(self, message: str, query_size: Optional[int] = None, size_cap: Optional[int] = None):
        self.query_size = query_size
        self.size_cap = size_cap
        super().__init__(message)


class OracleInconsistencyError(DominationError):
    """A decision oracle gave answers that contradict each other."""


class VerificationError(DominationError):
    """A verification suite found counterexamples."""
    exit_code = 4

    def __init__(self, message: str, seeds: Sequence[int] = ()):
        self.seeds = list(seeds)
        super().__init__(message)
