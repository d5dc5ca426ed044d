"""
High-precision reference values by brute-force bilateral summation (mpmath).

Only the defining q-series are used; the modular transformation never
appears here, so agreement with the main evaluators checks that code
independently. Slow by construction.
"""
from __future__ import annotations

import logging
import threading
from decimal import Decimal
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

from .contracts import ThetaKind
from .errors import OracleRefusal, require
from .scaled import ScaledReal

log = logging.getLogger(__name__)

Number = Union[int, float, str, Fraction, Decimal, mpmath.mpf]

MIN_DIGITS, MAX_DIGITS = 20, 100
GUARD_DIGITS = 10
MIN_T = 1e-6
MAX_PASSES = 4

# mp.dps is process-global
_LOCK = threading.RLock()


def _to_mpf(x: Number) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, Decimal):
        return mpmath.mpf(str(x))
    return mpmath.mpf(x)


def _exponent(kind: ThetaKind, n: int) -> mpmath.mpf:
    if kind in (ThetaKind.THETA3, ThetaKind.THETA4):
        return mpmath.mpf(n * n)
    return (mpmath.mpf(n) + mpmath.mpf(1) / 2) ** 2


def _pair(kind: ThetaKind, n: int, v: mpmath.mpf, log_q: mpmath.mpf) -> mpmath.mpf:
    """Term n plus its symmetric partner (-n, or -n-1 for half-integer indices)"""
    weight = mpmath.exp(_exponent(kind, n) * log_q)
    if kind is ThetaKind.THETA1:
        term = 2 * weight * mpmath.sinpi((2 * n + 1) * v)
    elif kind is ThetaKind.THETA2:
        term = 2 * weight * mpmath.cospi((2 * n + 1) * v)
    elif n == 0:
        return weight
    else:
        term = 2 * weight * mpmath.cospi(2 * n * v)
    if n % 2 and kind in (ThetaKind.THETA1, ThetaKind.THETA4):
        return -term
    return term


def _log_tail(kind: ThetaKind, n: int, log_q: mpmath.mpf) -> mpmath.mpf:
    # log of 2 q^{e(n+1)} / (1 - q^{e(n+2) - e(n+1)}), bound on every pair past n
    first = _exponent(kind, n + 1)
    gap = _exponent(kind, n + 2) - first
    return mpmath.log(2) + first * log_q - mpmath.log(-mpmath.expm1(gap * log_q))


def _bilateral(kind: ThetaKind, v: mpmath.mpf, t: mpmath.mpf, digits: int):
    log_q = -mpmath.pi * t
    log_eps = -digits * mpmath.log(10)
    total, biggest, n = mpmath.mpf(0), mpmath.mpf(0), 0
    while True:
        term = _pair(kind, n, v, log_q)
        total += term
        biggest = max(biggest, abs(term))
        reference = abs(total) if total != 0 else 2 * mpmath.exp(_exponent(kind, 0) * log_q)
        if _log_tail(kind, n, log_q) < log_eps + mpmath.log(reference):
            return total, biggest, n + 1
        n += 1


def oracle_theta(kind: ThetaKind, v: Number, t: Number, digits: int = 30) -> mpmath.mpf:
    """theta_kind(v | it) to `digits` significant digits

    Working precision starts at digits + 10 and is raised by the number of
    digits lost to cancellation until the sum is stable.
    """
    kind = ThetaKind.parse(kind)
    require(isinstance(digits, int) and MIN_DIGITS <= digits <= MAX_DIGITS,
            f"digits must be an integer in [{MIN_DIGITS}, {MAX_DIGITS}], got digits={digits!r}")
    with _LOCK:
        dps = digits + GUARD_DIGITS
        for _ in range(MAX_PASSES):
            with mp.workdps(dps):
                v_mp, t_mp = _to_mpf(v), _to_mpf(t)
                require(mpmath.isfinite(v_mp), f"v must be finite, got v={v!r}")
                require(t_mp > 0, f"t must be > 0, got t={t!r}")
                if t_mp < MIN_T:
                    raise OracleRefusal(f"oracle refuses t={t!r} < {MIN_T}; use the transformed formulas")
                total, biggest, terms = _bilateral(kind, v_mp, t_mp, digits)
                if total == 0:
                    return mpmath.mpf(0)
                lost = int(mpmath.ceil(mpmath.log10(biggest / abs(total)))) if biggest > abs(total) else 0
                if digits + GUARD_DIGITS + lost <= dps:
                    log.debug("oracle theta%d: %d terms at %d digits", kind, terms, dps)
                    return +total
            dps = digits + GUARD_DIGITS + lost
        log.debug("oracle theta%d: cancellation persisted up to %d digits", kind, dps)
        return total


def to_mpf(value: Union[ScaledReal, float], digits: int = 30) -> mpmath.mpf:
    """Exact-enough high-precision copy of an evaluator result"""
    if isinstance(value, ScaledReal):
        if value.is_zero:
            return mpmath.mpf(0)
        with mp.workdps(digits + GUARD_DIGITS):
            return value.sign * mpmath.exp(mpmath.mpf(value.log_mag))
    return mpmath.mpf(value)


def oracle_relative_error(value: Union[ScaledReal, float], reference: mpmath.mpf) -> float:
    """|value - reference| / |reference|; absolute error when the reference is zero"""
    with _LOCK, mp.workdps(MAX_DIGITS):
        x = to_mpf(value, MAX_DIGITS)
        if reference == 0:
            return float(abs(x))
        return float(abs(x - reference) / abs(reference))
