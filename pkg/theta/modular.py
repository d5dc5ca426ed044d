"""
Modular-transformed evaluation on the imaginary axis and the auto-selector.

Under tau -> -1/tau the nome e^{-pi t} becomes e^{-pi/t}, and with the
reductions of `frac` every theta turns into a real Gaussian sum:

    theta1(v|it) = (-1)^{[v]}  t^{-1/2} sum_n (-1)^n e^{-pi (n - ((v)))^2 / t}
    theta2(v|it) = (-1)^{m_v}  t^{-1/2} sum_n (-1)^n e^{-pi (n - [[v]])^2 / t}
    theta3(v|it) =             t^{-1/2} sum_n        e^{-pi (n - [[v]])^2 / t}
    theta4(v|it) =             t^{-1/2} sum_n        e^{-pi (n - ((v)))^2 / t}

The n = 0 Gaussian e^{-pi w^2/t} is factored out, so the remaining relative
terms e^{-pi (n^2 - 2nw)/t} are all <= 1 (|w| <= 1/2).
"""
from __future__ import annotations

import logging
import math
from typing import NamedTuple, Optional

from .contracts import EvalReport, Method, Nome, ThetaKind
from .core import MAX_TERMS, _check_tol, _check_v, log_reference, series_scale, theta_series
from .errors import ThetaConvergenceError, require
from .frac import decompose
from .scaled import ScaledReal, sum_scaled

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
CROSSOVER_T = 1.0
IDENTITY_T_RANGE = (0.05, 20.0)
RESIDUAL_TOL = 1e-15


class Reduced(NamedTuple):
    w: float      # centre of the Gaussian sum, in [-1/2, 1/2]
    gap: float    # 1 + 2w, exact near w = -1/2
    sign: int     # prefactor


def reduced_argument(kind: ThetaKind, v: float) -> Reduced:
    """Reduced argument and prefactor sign of the transformed sum

    theta1 is odd and theta2 even, so both are reduced to w in [-1/2, 0]: their
    zeros then sit at w = -1/2, where the paired sum vanishes term by term, and
    1 + 2w is formed from the exact nearest-integer remainder. |w| equals
    |((v))| for theta1 and |[[v]]| for theta2.
    """
    d = decompose(v)
    odd = -1 if d.nearest_int % 2 else 1
    if kind is ThetaKind.THETA1:
        r = abs(d.nearest_rem)
        sign = -odd if d.nearest_rem < 0 else odd
        return Reduced(r - 0.5, 2.0 * r, sign)
    if kind is ThetaKind.THETA2:
        r = abs(d.nearest_rem)
        return Reduced(-r, 1.0 - 2.0 * r, odd)
    w = d.nearest_rem if kind is ThetaKind.THETA3 else d.centered
    return Reduced(w, 1.0 + 2.0 * w, 1)


def _log_gauss_tail(n: int, w: float, t: float) -> float:
    # log of 2 e^{-pi (N^2 - 2N|w|)/t} / (1 - e^{-pi (2N+1-2|w|)/t}), bound on sum_{|n|>=N}
    aw = abs(w)
    return (LN2 - math.pi * (n * n - 2 * n * aw) / t
            - math.log(-math.expm1(-math.pi * (2 * n + 1 - 2 * aw) / t)))


def _relative_term(n: int, w: float, t: float) -> float:
    return math.exp(-math.pi * (n * n - 2 * n * w) / t)


def _relative_sum(alternating: bool, arg: Reduced, t: float, log_tol: float,
                  radius: Optional[int]) -> tuple[float, int, int]:
    """sum_n s_n e^{-pi(n^2 - 2nw)/t}; returns (sum, radius N, terms used)

    Plain sums cover |n| <= N-1. Alternating sums pair n with -1-n,
    (-1)^n e^{-pi(n^2-2nw)/t} (1 - e^{-pi(2n+1)(1+2w)/t}), covering -N..N-1,
    so the exact zero at w = -1/2 and the values near it keep their accuracy.
    """
    w = arg.w
    terms = []
    n = 0
    while True:
        if alternating:
            pair = _relative_term(n, w, t) * -math.expm1(-math.pi * (2 * n + 1) * arg.gap / t)
            terms.append(-pair if n % 2 else pair)
        elif n == 0:
            terms.append(1.0)
        else:
            terms.append(_relative_term(n, w, t) + _relative_term(-n, w, t))
        n += 1
        if radius is not None:
            if n >= radius:
                break
        elif _log_gauss_tail(n, w, t) < log_tol + log_reference(math.fsum(terms)):
            break
        if n > MAX_TERMS:
            raise ThetaConvergenceError(f"transformed sum did not converge in {MAX_TERMS} terms (t={t})")
    used = 2 * n if alternating else 2 * n - 1
    return math.fsum(terms), n, used


def theta_transformed(kind: ThetaKind, v: float, t: float, tol: float = 1e-12,
                      *, radius: Optional[int] = None) -> EvalReport:
    """theta_kind(v | it) through the transformed Gaussian sum

    Truncated at the first N with 2e^{-pi(N^2-2N|w|)/t}/(1-e^{-pi(2N+1-2|w|)/t}) < tol,
    tol relative to the factored-out n = 0 Gaussian and to the partial sum when
    that is smaller. `radius` forces N.
    """
    kind = ThetaKind.parse(kind)
    v = _check_v(v)
    t = Nome(float(t)).t
    log_tol = math.log(_check_tol(tol))
    arg = reduced_argument(kind, v)
    w = arg.w
    total, n, used = _relative_sum(kind.alternating, arg, t, log_tol, radius)
    log_scale = -0.5 * math.log(t) - math.pi * w * w / t
    if total == 0.0:
        value = ScaledReal.zero()
    else:
        value = ScaledReal(arg.sign if total > 0 else -arg.sign, log_scale + math.log(abs(total)))
    tail = ScaledReal.exp(log_scale + _log_gauss_tail(n, w, t))
    return EvalReport(value=value, terms_used=used, tail_bound=tail, method=Method.TRANSFORMED)


def theta_auto(kind: ThetaKind, v: float, t: float, tol: float = 1e-12) -> EvalReport:
    """Direct series for t >= 1, transformed sum for t < 1 (effective nome <= e^{-pi})"""
    t = Nome(float(t)).t
    if t >= CROSSOVER_T:
        log.debug("theta_auto: direct series at t=%g", t)
        return theta_series(kind, v, t, tol)
    log.debug("theta_auto: transformed sum at t=%g", t)
    return theta_transformed(kind, v, t, tol)


def transform_identity_residual(kind: ThetaKind, v: float, t: float) -> float:
    """Normalised difference between the direct series and the transformed sum

    |series - transformed| / max(|series|, |transformed|, s) where s is the
    leading-term scale the series tolerance refers to (1, or 2 q^{1/4}).
    """
    t = float(t)
    lo, hi = IDENTITY_T_RANGE
    require(lo <= t <= hi, f"transform_identity_residual needs {lo} <= t <= {hi}, got t={t!r}")
    a = theta_series(kind, v, t, RESIDUAL_TOL).value
    b = theta_transformed(kind, v, t, RESIDUAL_TOL).value
    diff = (a - b).abs()
    if diff.is_zero:
        return 0.0
    denom = max(a.abs(), b.abs(), series_scale(kind, t))
    return float(diff / denom)


def transformed_remainder(kind: ThetaKind, w: float, t: float, skip: int = 2) -> ScaledReal:
    """sum_{|n| >= skip} s_n e^{-pi(n^2 - 2nw)/t} in log space

    This is the normalized tail beyond the kept Gaussians: skip = 2 gives the
    two-term expansion remainder, skip = 1 the Gaussian-approximation error.
    Summation stops once the bound on the rest is below 2^-60 of the largest term.
    """
    kind = ThetaKind.parse(kind)
    require(-0.5 <= w <= 0.5, f"w must lie in [-1/2, 1/2], got w={w!r}")
    require(skip >= 1, f"skip must be >= 1, got skip={skip!r}")
    t = Nome(float(t)).t
    terms = []
    n = skip
    while True:
        s = -1 if kind.alternating and n % 2 else 1
        terms.append(ScaledReal(s, -math.pi * (n * n - 2 * n * w) / t))
        terms.append(ScaledReal(s, -math.pi * (n * n + 2 * n * w) / t))
        n += 1
        head = max(x.log_mag for x in terms)
        if _log_gauss_tail(n, w, t) < head - 60 * LN2:
            break
        if n > MAX_TERMS:
            raise ThetaConvergenceError(f"remainder sum did not converge in {MAX_TERMS} terms (t={t})")
    return sum_scaled(terms)
