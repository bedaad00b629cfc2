from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from pydantic import ValidationError as _PydanticValidationError


class ErrorCode(IntEnum):
    OK = 0
    VERIFICATION_FAILED = 1
    CONFIG = 2
    NOT_FOUND = 3
    IO = 4
    DEPENDENCY_MISSING = 8


class ToolkitError(Exception):
    code = ErrorCode.VERIFICATION_FAILED


class VerificationFailed(ToolkitError):
    code = ErrorCode.VERIFICATION_FAILED


class ConfigError(ToolkitError):
    code = ErrorCode.CONFIG


class UnknownVerifier(ConfigError):
    pass


class InvalidParameters(ConfigError):
    pass


class InvalidGrid(ConfigError):
    """Raised before any work starts; carries every rejected tuple with its reason."""

    def __init__(self, rejects: list[tuple[dict[str, int], str]]) -> None:
        self.rejects = rejects
        lines = [f"{params}: {reason}" for params, reason in rejects[:20]]
        more = f" (+{len(rejects) - 20} more)" if len(rejects) > 20 else ""
        super().__init__(f"{len(rejects)} invalid grid tuple(s): " + "; ".join(lines) + more)


class NotFoundError(ToolkitError):
    code = ErrorCode.NOT_FOUND


class ReportIOError(ToolkitError, ValueError):
    code = ErrorCode.IO


class MathDomainError(ConfigError):
    """A parameter tuple outside the hypotheses of the identity being evaluated."""


class NotInvertible(MathDomainError):
    pass


class UndefinedValuation(MathDomainError):
    pass


class NotAUnit(MathDomainError):
    pass


class NotARoot(MathDomainError):
    pass


class TooLarge(MathDomainError):
    pass


class Unsupported(MathDomainError):
    pass


class UnsupportedParity(Unsupported):
    pass


class UnsupportedPrime(Unsupported):
    pass


class EmptyStratum(MathDomainError):
    pass


class NotAdditive(MathDomainError):
    pass


class NoConstant(ToolkitError):
    # an implementation defect, not a parameter problem
    code = ErrorCode.VERIFICATION_FAILED


class NoCrossing(MathDomainError):
    pass


class NotCoprime(MathDomainError):
    pass


class OutOfRange(MathDomainError):
    pass


class AsymptoticRegimeRequired(MathDomainError):
    pass


class NoStationaryPoint(MathDomainError):
    pass


class MultipleStationaryPoints(MathDomainError):
    pass


class ContourTruncationFailure(MathDomainError):
    pass


class RankDeficientBasket(MathDomainError):
    pass


@dataclass
class ErrorInfo:
    code: ErrorCode
    message: str


def map_exception(exc: Exception) -> ErrorInfo:
    if isinstance(exc, ToolkitError):
        return ErrorInfo(exc.code, str(exc))
    if isinstance(exc, _PydanticValidationError):
        return ErrorInfo(ErrorCode.CONFIG, str(exc))
    if isinstance(exc, FileNotFoundError):
        return ErrorInfo(ErrorCode.NOT_FOUND, str(exc))
    if isinstance(exc, ImportError):
        return ErrorInfo(ErrorCode.DEPENDENCY_MISSING, str(exc))
    if isinstance(exc, OSError):
        return ErrorInfo(ErrorCode.IO, str(exc))
    # Fallback
    return ErrorInfo(ErrorCode.VERIFICATION_FAILED, str(exc))
