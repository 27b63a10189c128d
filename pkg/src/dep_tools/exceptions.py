"""
DEP-TOOLS Exceptions
====================

Error hierarchy shared by every subpackage. The CLI maps the three
families to exit codes: DataError -> 2, ContractViolation/TrainingError -> 3.
"""

from typing import Any, Optional


class DepToolsError(Exception):
    """Base class for all DEP-TOOLS errors"""


class DataError(DepToolsError):
    """Input data is malformed or unusable"""


class ConllFormatError(DataError):
    """A CoNLL-X line could not be read"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class TreeStructureError(DataError):
    """Head assignment is not a single tree rooted at 0"""


class EmptyCorpusError(DataError):
    """No usable training examples"""


class GenerationError(DataError):
    """Separable corpus generation ran out of attempts"""

    def __init__(self, message: str, achieved_margin: float):
        super().__init__(f"{message} (best achieved margin {achieved_margin:.6g})")
        self.achieved_margin = achieved_margin


class ModelFileError(DataError):
    """Model file is truncated or has the wrong header"""


class ContractViolation(DepToolsError):
    """An operation was called outside its preconditions"""


class EnumerationLimitError(ContractViolation):
    """Exhaustive enumeration requested for a sentence that is too long"""


class TrainingError(DepToolsError):
    """Training aborted; carries whatever trace was recorded so far"""

    def __init__(self, message: str, trace: Optional[Any] = None):
        super().__init__(message)
        self.trace = trace
