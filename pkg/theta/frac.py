"""
Integer / fractional reductions of a real number.

    x = [x] + {x}            0 <= {x} < 1
    ((x)) = {x} - 1/2        -1/2 <= ((x)) < 1/2
    x = m_x + [[x]]          -1/2 <= [[x]] < 1/2   (half-integers round up)

plus sin(pi x) / cos(pi x) with exact reduction, which every evaluator uses
so that zeros at integers and half-integers come out exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import require

_BELOW_ONE = math.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class Decomposition:
    x: float
    int_part: int       # [x]
    frac_part: float    # {x}
    centered: float     # ((x))
    nearest_int: int    # m_x
    nearest_rem: float  # [[x]]


def _floor_split(x: float) -> tuple[int, float]:
    base = math.floor(x)
    rest = x - base
    if rest >= 1.0:
        # only reachable for tiny negative x, where 1 + x rounds up to 1
        rest = _BELOW_ONE
    return base, rest


def _nearest_split(x: float) -> tuple[int, float]:
    if abs(x) < 0.5:
        return 0, x
    base = math.floor(x)
    rest = x - base  # exact once |x| >= 1/2
    if rest >= 0.5:
        return base + 1, rest - 1.0
    return base, rest


def decompose(x: float) -> Decomposition:
    """Split `x` into its integer, fractional, centered and nearest-integer parts"""
    x = float(x)
    require(math.isfinite(x), f"decompose needs a finite x, got {x!r}")
    int_part, frac_part = _floor_split(x)
    nearest_int, nearest_rem = _nearest_split(x)
    return Decomposition(
        x=x,
        int_part=int_part,
        frac_part=frac_part,
        centered=frac_part - 0.5,
        nearest_int=nearest_int,
        nearest_rem=nearest_rem,
    )


def _reduce_mod2(x: float) -> float:
    # fmod is exact; the shifts below are exact by Sterbenz
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    return r


def sinpi(x: float) -> float:
    """sin(pi x), exactly 0 at integers"""
    r = _reduce_mod2(x)
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def cospi(x: float) -> float:
    """cos(pi x), exactly 0 at half-integers"""
    a = abs(_reduce_mod2(x))
    if a > 0.5:
        return -math.sin(math.pi * (a - 0.5))
    if a > 0.25:
        return math.sin(math.pi * (0.5 - a))
    return math.cos(math.pi * a)
