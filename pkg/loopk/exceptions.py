"""
Global exception and warning classes.
"""
import logging
import traceback
from typing import Any, Dict, Optional

from .choices import ExitCode

logger = logging.getLogger(__name__)


class LoopKError(Exception):
    """
    Base class for every error raised on purpose by loopk.
    """

    exit_code = ExitCode.INTEGRITY
    default_detail = "Internal error."

    def __init__(self, detail: Optional[str] = None):
        self.detail = detail if detail is not None else self.default_detail
        super().__init__(self.detail)


class UsageError(LoopKError):
    exit_code = ExitCode.USAGE
    default_detail = "Invalid usage."


class ConfigurationError(UsageError):
    default_detail = "Invalid configuration."


class ArgumentError(UsageError):
    default_detail = "Invalid argument."


class LengthCapExceeded(UsageError):
    default_detail = "Word length exceeds the configured cap."

    def __init__(self, length: int, cap: int):
        self.length = length
        self.cap = cap
        super().__init__(
            f"word of length {length} exceeds the length cap {cap}; "
            f"raise it with --max-word-len or LOOPK_LENGTH_CAP"
        )


class IntegrityError(LoopKError):
    """
    A mathematical identity that must hold did not. Always a bug or a
    counterexample to a proven statement, never bad input.
    """

    default_detail = "Internal integrity check failed."


class NotDivisible(IntegrityError):
    default_detail = "Polynomial division is not exact."

    def __init__(self, dividend: Any, divisor: Any, remainder: Any):
        self.dividend = dividend
        self.divisor = divisor
        self.remainder = remainder
        super().__init__(
            f"({dividend}) is not divisible by ({divisor}); remainder {remainder}"
        )


class SingularMatrixError(IntegrityError):
    default_detail = "Matrix is singular."


class CacheCorrupted(LoopKError):
    default_detail = "Cache entry failed verification."


class ParseError(UsageError):
    default_detail = "Malformed input."


def _get_detail(detail: Any) -> str:
    if isinstance(detail, (list, tuple)):
        return "; ".join(x if isinstance(x, str) else _get_detail(x) for x in detail)
    if isinstance(detail, dict):
        return "; ".join(f"{k}: {_get_detail(v)}" for k, v in detail.items())
    return str(detail)


def exception_handler(
    exc: BaseException, context: Optional[Dict[str, Any]] = None
) -> int:
    """
    Translate an exception escaping a command into a process exit code.

    :param exc: the exception raised by the command.
    :param context: optional dict with `command` and `debug` keys.
    :return: the exit code to hand back to the shell.
    """
    context = context or {}
    command = context.get("command", "loopk")

    if isinstance(exc, LoopKError):
        code = int(exc.exit_code)
        detail = _get_detail(exc.detail)
        if code == ExitCode.USAGE:
            logger.error("%s: %s", command, detail)
        else:
            logger.critical("%s: integrity failure: %s", command, detail)
    else:
        code = int(ExitCode.INTEGRITY)
        logger.critical("%s: unexpected %s: %s", command, type(exc).__name__, exc)

    if context.get("debug"):
        traceback.print_exception(type(exc), exc, exc.__traceback__)

    return code
