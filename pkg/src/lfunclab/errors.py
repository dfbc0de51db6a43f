"""Exception taxonomy shared across the library.

The CLI maps these onto its exit-code contract: usage problems exit 2,
numeric precondition failures (poles, non-zeros passed as zeros) exit 3.
"""

from __future__ import annotations


class LFuncLabError(Exception):
    """Base class for library errors."""


class UsageError(LFuncLabError):
    """Malformed request: unknown stream spec, bad flag combination."""


class PreconditionError(LFuncLabError):
    """Numeric precondition violated (pole hit, claimed zero is not a zero, ...)."""


class PoleError(PreconditionError):
    """Evaluation requested exactly at a pole."""


class UnsupportedEvaluation(LFuncLabError):
    """The stream has no critical-strip evaluator; use coefficient-side operations."""


class CoefficientShortfall(LFuncLabError):
    """A scan needs coefficients beyond the stream's declared prefix."""


class InternalConsistencyError(LFuncLabError):
    """A self-check failed (e.g. rotated critical-line value not real)."""
