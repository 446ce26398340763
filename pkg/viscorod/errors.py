"""
异常与样本标记
Exception hierarchy shared by every viscorod module, plus the per-sample
flags that are written to the results file instead of aborting a sweep.
"""
from enum import Enum
from typing import Optional


class ViscorodError(Exception):
    """Base class of all viscorod errors."""


class DomainError(ViscorodError, ValueError):
    """An argument lies outside the domain of the operation."""


class ModelSpecError(DomainError):
    """A constitutive or forcing description string could not be parsed or validated."""


class UnsafeModelError(DomainError):
    """A model that violates the normalisation assumptions entered the mode/kernel pipeline."""


class EvaluationError(ViscorodError, ArithmeticError):
    """Overflow or a failed finite-difference consistency check."""


class ConvergenceError(ViscorodError):
    """Newton iteration for a pole did not converge."""

    def __init__(self, message: str, w: Optional[float] = None):
        super().__init__(message)
        self.w = w


class BracketError(ViscorodError):
    """No sign change in a root bracket."""


class AccuracyError(ViscorodError):
    """The error estimate of a sample exceeds its budget."""

    def __init__(self, message: str, value: float = float("nan"), error: float = float("nan")):
        super().__init__(message)
        self.value = value
        self.error = error


class ConfigError(ViscorodError):
    """Invalid run configuration; carries the offending field and file line when known."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = ""
        if field is not None:
            location = f"[{field}"
            if line is not None:
                location += f", line {line}"
            location += "] "
        super().__init__(f"{location}{message}")
        self.reason = message


class SampleFlag(str, Enum):
    """Per-sample status flags written in the `flags` column."""
    ACCURACY = "accuracy"
    UNRESOLVED_MODES = "unresolved_modes"
    DERIVED_STRESS = "derived_stress"
    ORACLE_SKIPPED = "oracle_skipped"


def join_flags(flags) -> str:
    """Stable `|`-joined rendering of a flag collection."""
    return "|".join(sorted({SampleFlag(f).value for f in flags}))
