"""
Two-term expansions, the Gaussian approximation and their certification.

For 0 < t < a the normalized theta

    N_j(v, t) = s_j t^{1/2} e^{pi w^2 / t} theta_j(v | it)

(s_j the sign prefactor, w the reduced argument) satisfies

    N_j = 1 -/+ 2 e^{-pi/t} cosh(2 pi w / t) + R1_j,   |R1_j| <= 2 e^{-2pi/t} / (1 - e^{-pi/a})

and, with u = 1/2 + x sqrt t (kinds 1, 4) or u = x sqrt t (kinds 2, 3),

    t^{1/2} theta_j(u | it) = e^{-pi x^2} (1 + R2_j),
    |R2_j| <= (4 - 2e^{-pi}) / (1 - e^{-pi}) e^{-(pi - eps)/t}

for |x| <= C and t < eps^2 / (4 pi^2 C^2).

Measured remainders come from the evaluators when their accuracy is at least
1e3 times tighter than the bound, and otherwise from the remainder series
itself summed in log space.
"""
from __future__ import annotations

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .contracts import (
    CertificationReport,
    ExpansionCertification,
    ExpansionReport,
    Measurement,
    Nome,
    ThetaKind,
)
from .errors import require
from .modular import reduced_argument, theta_auto, transformed_remainder
from .scaled import ScaledReal
from .settings import get_settings

log = logging.getLogger(__name__)

EPS = sys.float_info.epsilon
LN2 = math.log(2.0)
COR_CONSTANT = (4.0 - 2.0 * math.exp(-math.pi)) / (1.0 - math.exp(-math.pi))
DIRECT_MARGIN = 1e-3
EVAL_TOL = 1e-17
SATISFIED_SLACK = math.log1p(1e-9)
EXPANSION_V_RANGE = (-2.5, 2.5)

T = TypeVar("T")
R = TypeVar("R")


def _check_t(t: float) -> float:
    return Nome(float(t)).t


def within_bound(measured: ScaledReal, bound: ScaledReal) -> bool:
    """|measured| <= bound (1 + 1e-9)"""
    return measured.is_zero or measured.log_abs() <= bound.log_abs() + SATISFIED_SLACK


def parallel_map(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Order-preserving map over THETA_GAUSS_THREADS workers"""
    threads = get_settings().threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- expansion

def leading_expansion(kind: ThetaKind, v: float, t: float) -> ScaledReal:
    """1 -/+ 2 e^{-pi/t} cosh(2 pi w / t), minus for theta1/theta2

    Written as 1 -/+ (e^{-pi(1-2|w|)/t} + e^{-pi(1+2|w|)/t}); both exponents
    are <= 0 and the 1 - e^{...} part goes through expm1.
    """
    kind = ThetaKind.parse(kind)
    t = _check_t(t)
    arg = reduced_argument(kind, float(v))
    near = arg.gap if arg.w <= 0 else 1.0 - 2.0 * arg.w
    big = -math.pi * near / t
    small = -math.pi * (1.0 + 2.0 * abs(arg.w)) / t
    if not kind.alternating:
        return ScaledReal.exp(math.log1p(math.exp(big) + math.exp(small)))
    return ScaledReal.from_float(-math.expm1(big)) - ScaledReal.exp(small)


def thm22_bound(t: float, a: float) -> ScaledReal:
    """2 e^{-2pi/t} / (1 - e^{-pi/a}) for 0 < t < a"""
    t, a = float(t), float(a)
    require(math.isfinite(a) and 0 < t < a, f"two-term bound needs 0 < t < a, got t={t!r}, a={a!r}")
    return ScaledReal.exp(LN2 - 2.0 * math.pi / t - math.log(-math.expm1(-math.pi / a)))


def normalized_theta(kind: ThetaKind, v: float, t: float, tol: float = EVAL_TOL) -> Tuple[ScaledReal, ScaledReal]:
    """(N_j(v, t), bound on its truncation error) through theta_auto"""
    kind = ThetaKind.parse(kind)
    w, _, sign = reduced_argument(kind, float(v))
    report = theta_auto(kind, v, t, tol)
    scale = 0.5 * math.log(t) + math.pi * w * w / t
    value = report.value.scale_log(scale)
    return (-value if sign < 0 else value), report.tail_bound.scale_log(scale)


def thm22_check(kind: ThetaKind, v: float, t: float, a: float, *,
                allow_log_space: bool = True) -> ExpansionReport:
    """Measure R1_j = N_j - leading against the two-term bound

    The direct measurement is used when its accuracy (about 64 ulp of N_j plus
    the truncation tail) is within 1e-3 of the bound. Otherwise the remainder
    is summed from its own series in log space, or reported indeterminate when
    that is disabled.
    """
    kind = ThetaKind.parse(kind)
    v = float(v)
    bound = thm22_bound(t, a)
    leading = leading_expansion(kind, v, t)
    measured: Optional[ScaledReal] = None
    path: Measurement = "indeterminate"

    normalized, tail = normalized_theta(kind, v, t)
    accuracy = ScaledReal.from_float(64 * EPS) + tail
    if accuracy <= bound.scale_log(math.log(DIRECT_MARGIN)):
        measured, path = normalized - leading, "direct"
    elif allow_log_space:
        w = reduced_argument(kind, v).w
        measured, path = transformed_remainder(kind, w, t, skip=2), "remainder_series"
    else:
        log.warning("expansion check for theta%d at v=%g, t=%g is indeterminate: "
                    "evaluation accuracy %s is not below 1e-3 of the bound", kind, v, t, accuracy)

    satisfied = None if measured is None else within_bound(measured.abs(), bound)
    return ExpansionReport(leading=leading, remainder_bound=bound, measured_remainder=measured,
                           satisfied=satisfied, measurement=path)


# ---------------------------------------------------------------- gaussian

def cor_precondition(C: float, eps: float) -> float:
    """t_max = eps^2 / (4 pi^2 C^2); callers need t < t_max < 1

    t < t_max gives |x| sqrt(t) <= eps / (2 pi) < 1/2 on |x| <= C, which is
    all the argument collapse needs, so eps is only bounded by 1.
    """
    C, eps = float(C), float(eps)
    require(math.isfinite(C) and C > 0, f"C must be finite and > 0, got C={C!r}")
    require(0 < eps < 1.0, f"eps must satisfy 0 < eps < 1, got eps={eps!r}")
    t_max = eps * eps / (4.0 * math.pi ** 2 * C * C)
    require(t_max < 1.0, f"t_max={t_max:.6g} must be < 1 for C={C}, eps={eps}")
    return t_max


def cor_bound(t: float, eps: float) -> ScaledReal:
    """((4 - 2e^{-pi}) / (1 - e^{-pi})) e^{-(pi - eps)/t}"""
    t, eps = float(t), float(eps)
    require(0 < eps < 1, f"eps must satisfy 0 < eps < 1, got eps={eps!r}")
    require(0 < t < 1, f"Gaussian bound needs 0 < t < 1, got t={t!r}")
    return ScaledReal.exp(math.log(COR_CONSTANT) - (math.pi - eps) / t)


def cor_intermediate_bound(t: float, C: float) -> ScaledReal:
    """2 e^{-pi/t + 2 pi C / sqrt t} + 2 e^{-2pi/t} / (1 - e^{-pi}), before eps is traded in"""
    t, C = float(t), float(C)
    require(0 < t < 1, f"Gaussian bound needs 0 < t < 1, got t={t!r}")
    require(math.isfinite(C) and C > 0, f"C must be finite and > 0, got C={C!r}")
    first = ScaledReal.exp(LN2 - math.pi / t + 2.0 * math.pi * C / math.sqrt(t))
    return first + thm22_bound(t, 1.0)


def _gaussian_argument(kind: ThetaKind, x: float, t: float) -> float:
    shift = 0.5 if kind.uses_centered else 0.0
    return shift + math.sqrt(t) * x


def _check_gaussian(x: float, t: float) -> Tuple[float, float]:
    x, t = float(x), float(t)
    require(math.isfinite(x), f"x must be finite, got x={x!r}")
    require(0 < t < 1, f"Gaussian approximation needs 0 < t < 1, got t={t!r}")
    require(abs(x) * math.sqrt(t) < 0.5, f"Gaussian approximation needs |x| sqrt(t) < 1/2, got x={x!r}, t={t!r}")
    return x, t


def gaussian_approx(kind: ThetaKind, x: float, t: float) -> Tuple[ScaledReal, ScaledReal]:
    """(t^{1/2} theta_j(u | it), e^{-pi x^2})"""
    kind = ThetaKind.parse(kind)
    x, t = _check_gaussian(x, t)
    report = theta_auto(kind, _gaussian_argument(kind, x, t), t, EVAL_TOL)
    return report.value.scale_log(0.5 * math.log(t)), ScaledReal.exp(-math.pi * x * x)


def measured_remainder(kind: ThetaKind, x: float, t: float,
                       reference: Optional[ScaledReal] = None) -> Tuple[ScaledReal, Measurement]:
    """R2_j = approx / target - 1 and how it was measured

    With a reference bound the direct ratio is used when its accuracy estimate
    tail + 32 ulp (1 + 2 pi |x| / sqrt t) is within 1e-3 of the reference;
    otherwise (or without a reference) the remainder series
    sum_{n != 0} s_n e^{-pi(n^2 - 2nw)/t}, w = x sqrt t, is summed in log space.
    """
    kind = ThetaKind.parse(kind)
    x, t = _check_gaussian(x, t)
    if reference is not None:
        report = theta_auto(kind, _gaussian_argument(kind, x, t), t, EVAL_TOL)
        target_log = -math.pi * x * x
        rel_tail = report.tail_bound.scale_log(0.5 * math.log(t) - target_log)
        accuracy = rel_tail + ScaledReal.from_float(32 * EPS * (1.0 + 2.0 * math.pi * abs(x) / math.sqrt(t)))
        if accuracy <= reference.scale_log(math.log(DIRECT_MARGIN)):
            ratio = report.value.scale_log(0.5 * math.log(t) - target_log)
            return ratio - ScaledReal.one(), "direct"
    return transformed_remainder(kind, x * math.sqrt(t), t, skip=1), "remainder_series"


def _validated_t_values(t_values: Iterable[float], limit: float, C: float, eps: float) -> List[float]:
    values = [float(t) for t in t_values]
    require(bool(values), "certification needs at least one t value")
    for t in values:
        require(0 < t, f"t must be > 0, got t={t!r}")
        require(t < limit, f"t={t!r} >= t_max={limit:.6g} for C={C}, eps={eps}")
    return values


def _decay_slope(t_values: Sequence[float], sups: Sequence[ScaledReal]) -> Optional[float]:
    points = [(1.0 / t, s.log_mag) for t, s in zip(t_values, sups) if not s.is_zero]
    if len({p[0] for p in points}) < 2:
        return None
    inv_t, logs = zip(*points)
    return float(np.polyfit(np.asarray(inv_t), np.asarray(logs), 1)[0])


def certify(kind: ThetaKind, C: float, eps: float, t_values: Iterable[float],
            x_count: int = 101) -> CertificationReport:
    """Sup over a uniform x grid on [-C, C] of |R2_j| against the Gaussian bound, per t"""
    kind = ThetaKind.parse(kind)
    t_max = cor_precondition(C, eps)
    require(int(x_count) >= 2, f"x_count must be >= 2, got x_count={x_count!r}")
    values = _validated_t_values(t_values, t_max, C, eps)
    xs = [float(x) for x in np.linspace(-C, C, int(x_count))]

    def sweep(t: float) -> Tuple[ScaledReal, Measurement]:
        bound = cor_bound(t, eps)
        measured = [measured_remainder(kind, x, t, reference=bound) for x in xs]
        path: Measurement = "direct" if all(p == "direct" for _, p in measured) else "remainder_series"
        if path != "direct":
            log.info("theta%d at t=%g: measured through the log-space remainder series", kind, t)
        return max(r.abs() for r, _ in measured), path

    results = parallel_map(sweep, values)
    sups = [s for s, _ in results]
    bounds = [cor_bound(t, eps) for t in values]
    return CertificationReport(
        kind=kind, C=float(C), eps=float(eps), x_count=int(x_count), t_values=values,
        sup_measured=sups, bounds=bounds,
        intermediate_bounds=[cor_intermediate_bound(t, C) for t in values],
        paths=[p for _, p in results],
        all_pass=all(within_bound(s, b) for s, b in zip(sups, bounds)),
        decay_slope=_decay_slope(values, sups),
    )


def certify_expansion(kind: ThetaKind, t_values: Iterable[float], a: float = 1.0,
                      v_count: int = 41) -> ExpansionCertification:
    """Sup over a v grid on [-2.5, 2.5] of |R1_j| against the two-term bound, per t"""
    kind = ThetaKind.parse(kind)
    require(int(v_count) >= 2, f"v_count must be >= 2, got v_count={v_count!r}")
    values = [float(t) for t in t_values]
    require(bool(values), "certification needs at least one t value")
    vs = [float(v) for v in np.linspace(*EXPANSION_V_RANGE, int(v_count))]

    def sweep(t: float) -> Tuple[ScaledReal, bool]:
        reports = [thm22_check(kind, v, t, a) for v in vs]
        return max(r.measured_remainder.abs() for r in reports), all(r.satisfied for r in reports)

    results = parallel_map(sweep, values)
    return ExpansionCertification(
        kind=kind, a=float(a), v_count=int(v_count), t_values=values,
        sup_measured=[s for s, _ in results],
        bounds=[thm22_bound(t, a) for t in values],
        all_pass=all(ok for _, ok in results),
    )
