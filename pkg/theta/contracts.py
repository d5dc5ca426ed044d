"""
Contract types shared by the evaluators, the certification harness and the CLI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .errors import ThetaDomainError, require
from .scaled import ScaledReal


class ThetaKind(IntEnum):
    THETA1 = 1
    THETA2 = 2
    THETA3 = 3
    THETA4 = 4

    @classmethod
    def parse(cls, value: "int | str | ThetaKind") -> "ThetaKind":
        """Accept 1..4, '1'..'4', 'theta3' or a member"""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().removeprefix("theta")
        try:
            return cls(int(text))
        except ValueError:
            raise ThetaDomainError(f"theta kind must be one of 1, 2, 3, 4; got {value!r}") from None

    @property
    def alternating(self) -> bool:
        """Kinds whose transformed Gaussian sum carries (-1)^n"""
        return self in (ThetaKind.THETA1, ThetaKind.THETA2)

    @property
    def uses_centered(self) -> bool:
        """Kinds reduced by ((v)) rather than [[v]]"""
        return self in (ThetaKind.THETA1, ThetaKind.THETA4)


class Method(str, Enum):
    DIRECT_SERIES = "direct_series"
    PRODUCT = "product"
    TRANSFORMED = "transformed"


@dataclass(frozen=True)
class Nome:
    """q = e^{-pi t} on the imaginary axis tau = i t"""

    t: float

    def __post_init__(self):
        require(math.isfinite(self.t) and self.t > 0, f"t must be finite and > 0, got t={self.t!r}")

    @property
    def log_q(self) -> float:
        return -math.pi * self.t

    def power(self, e: float) -> float:
        """q^e"""
        return math.exp(e * self.log_q)

    def one_minus_power(self, e: float) -> float:
        """1 - q^e without cancellation"""
        return -math.expm1(e * self.log_q)


class EvalReport(BaseModel):
    """Value of theta_kind(v | it) with its rigorous truncation bound"""
    value: ScaledReal
    terms_used: int = Field(ge=1)
    tail_bound: ScaledReal
    method: Method

    @model_validator(mode="after")
    def _tail_nonnegative(self):
        if self.tail_bound.sign < 0:
            raise ValueError("tail_bound must be nonnegative")
        return self


Measurement = Literal["direct", "remainder_series", "indeterminate"]


class ExpansionReport(BaseModel):
    """Two-term expansion of a normalized theta against its remainder bound"""
    leading: ScaledReal
    remainder_bound: ScaledReal
    measured_remainder: Optional[ScaledReal] = None
    satisfied: Optional[bool] = None
    measurement: Measurement = "indeterminate"


class CertificationReport(BaseModel):
    """Sup over an x grid of the Gaussian-approximation error, per t"""
    kind: ThetaKind
    C: float
    eps: float
    x_count: int
    t_values: List[float]
    sup_measured: List[ScaledReal]
    bounds: List[ScaledReal]
    intermediate_bounds: List[ScaledReal]
    paths: List[Measurement]
    all_pass: bool
    decay_slope: Optional[float] = None

    @model_validator(mode="after")
    def _aligned(self):
        n = len(self.t_values)
        if not (len(self.sup_measured) == len(self.bounds) == len(self.intermediate_bounds) == len(self.paths) == n):
            raise ValueError("per-t lists must share one length")
        return self


class ExpansionCertification(BaseModel):
    """Sup over a v grid of the two-term expansion remainder, per t"""
    kind: ThetaKind
    a: float
    v_count: int
    t_values: List[float]
    sup_measured: List[ScaledReal]
    bounds: List[ScaledReal]
    all_pass: bool
