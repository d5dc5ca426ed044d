"""
Sign + natural-log magnitude reals.

Values such as e^{-pi/t} at t = 1e-3 (about e^{-3141.6}) or the prefactors
e^{pi w^2/t} live far outside the float range. A ScaledReal keeps them as
sign * e^{log_mag} and composes them without under/overflow; conversion back
to a float is explicit and flagged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Literal, NamedTuple

from .errors import ThetaDomainError

# pivoted differences at or below one float ulp of 1 count as exact cancellation
_CANCEL = 2.0 ** -52
_MIN_NORMAL = 2.2250738585072014e-308

PlainFlag = Literal["ok", "underflow", "overflow"]


class PlainValue(NamedTuple):
    value: float
    flag: PlainFlag


@total_ordering
@dataclass(frozen=True)
class ScaledReal:
    """sign * e^{log_mag}; sign 0 is exact zero and carries log_mag = -inf"""

    sign: int
    log_mag: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ThetaDomainError(f"ScaledReal sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0 or self.log_mag == -math.inf:
            object.__setattr__(self, "sign", 0)
            object.__setattr__(self, "log_mag", -math.inf)
        elif not math.isfinite(self.log_mag):
            raise ThetaDomainError(f"ScaledReal log_mag must be finite, got {self.log_mag!r}")

    # constructors

    @classmethod
    def zero(cls) -> "ScaledReal":
        return cls(0)

    @classmethod
    def one(cls) -> "ScaledReal":
        return cls(1, 0.0)

    @classmethod
    def exp(cls, log_mag: float, sign: int = 1) -> "ScaledReal":
        """sign * e^{log_mag}"""
        return cls(sign, log_mag)

    @classmethod
    def from_float(cls, value: float) -> "ScaledReal":
        value = float(value)
        if not math.isfinite(value):
            raise ThetaDomainError(f"cannot scale non-finite value {value!r}")
        if value == 0.0:
            return cls(0)
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    # queries

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def abs(self) -> "ScaledReal":
        return ScaledReal(abs(self.sign), self.log_mag)

    def log_abs(self) -> float:
        """ln |self|; -inf for zero"""
        return self.log_mag

    def to_plain(self) -> PlainValue:
        return to_plain(self)

    def __float__(self) -> float:
        return to_plain(self).value

    # arithmetic

    def __neg__(self) -> "ScaledReal":
        return ScaledReal(-self.sign, self.log_mag)

    def __mul__(self, other: "ScaledReal") -> "ScaledReal":
        return mul(self, other)

    def __truediv__(self, other: "ScaledReal") -> "ScaledReal":
        if other.sign == 0:
            raise ThetaDomainError("division of a ScaledReal by zero")
        return mul(self, ScaledReal(other.sign, -other.log_mag))

    def __add__(self, other: "ScaledReal") -> "ScaledReal":
        return add(self, other)

    def __sub__(self, other: "ScaledReal") -> "ScaledReal":
        return add(self, -other)

    def scale_log(self, delta: float) -> "ScaledReal":
        """Multiply by e^{delta}"""
        if self.sign == 0:
            return self
        return ScaledReal(self.sign, self.log_mag + delta)

    def __lt__(self, other: "ScaledReal") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.log_mag < other.log_mag
        return self.log_mag > other.log_mag

    def __repr__(self) -> str:
        return f"ScaledReal({self.sign}, exp({self.log_mag}))"


def mul(a: ScaledReal, b: ScaledReal) -> ScaledReal:
    if a.sign == 0 or b.sign == 0:
        return ScaledReal(0)
    return ScaledReal(a.sign * b.sign, a.log_mag + b.log_mag)


def add(a: ScaledReal, b: ScaledReal) -> ScaledReal:
    """a + b pivoted on the larger log magnitude"""
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    if a.log_mag < b.log_mag:
        a, b = b, a
    diff = b.log_mag - a.log_mag
    if a.sign == b.sign:
        return ScaledReal(a.sign, a.log_mag + math.log1p(math.exp(diff)))
    if -diff <= _CANCEL:
        return ScaledReal(0)
    return ScaledReal(a.sign, a.log_mag + math.log1p(-math.exp(diff)))


def sum_scaled(values: Iterable[ScaledReal]) -> ScaledReal:
    """Sum many values around a single pivot; only an exact float zero cancels"""
    items = [v for v in values if v.sign != 0]
    if not items:
        return ScaledReal(0)
    pivot = max(v.log_mag for v in items)
    total = math.fsum(v.sign * math.exp(v.log_mag - pivot) for v in items)
    if total == 0.0:
        return ScaledReal(0)
    return ScaledReal(1 if total > 0 else -1, pivot + math.log(abs(total)))


def to_plain(a: ScaledReal) -> PlainValue:
    """Convert to a float, flagging underflow (incl. subnormals) and overflow"""
    if a.sign == 0:
        return PlainValue(0.0, "ok")
    try:
        value = a.sign * math.exp(a.log_mag)
    except OverflowError:
        return PlainValue(a.sign * math.inf, "overflow")
    if abs(value) < _MIN_NORMAL:
        return PlainValue(value, "underflow")
    return PlainValue(value, "ok")
