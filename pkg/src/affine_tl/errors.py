"""
Exception hierarchy for the affine Temperley-Lieb engine.

Every error raised by the package derives from AffineTLError, which is a
ValueError so callers that only care about bad input can catch the builtin.
"""

from typing import Any, List, Optional


class AffineTLError(ValueError):
    """Base class for all domain errors of the package."""


class InvalidRankError(AffineTLError):
    """Rank below 2, or operands built over different ranks."""


class WordError(AffineTLError):
    """Letter out of range or malformed word text."""


class MalformedWordError(WordError):
    """Word text that does not parse; a usage error at the command line."""


class NotFullyCommutativeError(AffineTLError):
    """A word that is not a reduced expression of an FC element."""

    def __init__(self, message: str, violations: Optional[List[Any]] = None):
        super().__init__(message)
        self.violations: List[Any] = list(violations or [])


class DescriptorError(AffineTLError):
    """Type I descriptor outside the index ranges of its shape."""


class CancellableElementError(AffineTLError):
    """Classification requested for an element with a weak star move."""


class ClassificationError(AffineTLError):
    """No non-cancellable case matched a non-cancellable element."""


class DiagramFormatError(AffineTLError):
    """Malformed diagram data."""


class InconsistencyError(AffineTLError):
    """An internal invariant of the engine failed."""


class ConfigError(AffineTLError):
    """Invalid suite configuration."""
