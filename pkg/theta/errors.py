"""
Exception hierarchy for theta evaluation and certification.
"""
from __future__ import annotations


class ThetaError(Exception):
    """Base class for every error raised by the theta packages"""


class ThetaDomainError(ThetaError, ValueError):
    """An argument violates an operation's precondition"""


class ThetaConvergenceError(ThetaError, RuntimeError):
    """A summation or product loop hit its hard term cap"""


class OracleRefusal(ThetaDomainError):
    """The high-precision oracle declines to sum at this nome"""


def require(condition: bool, message: str) -> None:
    """Raise ThetaDomainError with `message` unless `condition` holds"""
    if not condition:
        raise ThetaDomainError(message)
