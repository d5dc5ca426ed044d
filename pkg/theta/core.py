"""
Direct evaluation of theta_1..theta_4 (v | it) for real v and t > 0.

Two independent routes, each with a rigorous truncation bound:

* sum forms, folded to one-sided trigonometric series
      theta1 = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi v)
      theta2 = 2 sum_{n>=0} q^{(n+1/2)^2} cos((2n+1) pi v)
      theta3 = 1 + 2 sum_{n>=1} q^{n^2} cos(2 pi n v)
      theta4 = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2 pi n v)
* triple products with the z, 1/z factors paired into real quadratics.

q = e^{-pi t}. The 2 q^{1/4} factor of theta1/theta2 is kept in log space.
"""
from __future__ import annotations

import logging
import math
from typing import Iterable, NamedTuple, Optional

from .contracts import EvalReport, Method, Nome, ThetaKind
from .errors import ThetaConvergenceError, require
from .frac import cospi, decompose, sinpi
from .scaled import ScaledReal
from .settings import get_settings

log = logging.getLogger(__name__)

MAX_TERMS = 100_000
MAX_FACTORS = 1_000_000
LN2 = math.log(2.0)
REL_FLOOR = 1e-12


class PochhammerResult(NamedTuple):
    value: float
    err_bound: float
    factors_used: int


def _log0(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _check_tol(tol: float) -> float:
    tol = float(tol)
    require(math.isfinite(tol) and tol > 0, f"tol must be finite and > 0, got tol={tol!r}")
    return tol


def _check_v(v: float) -> float:
    v = float(v)
    require(math.isfinite(v), f"v must be finite, got v={v!r}")
    return v


def log_reference(partial: float) -> float:
    """ln min(1, |partial|), floored at REL_FLOOR; tol is taken relative to this"""
    return math.log(min(1.0, max(abs(partial), REL_FLOOR)))


def q_pochhammer(a: float, q: float, tol: float) -> PochhammerResult:
    """(a; q)_inf = prod_{k>=0} (1 - a q^k), stopped by the product-tail rule

    After K factors the rest differs from 1 by at most exp(|a||q|^K/(1-|q|)) - 1,
    so the truncation error is at most |partial| times that.
    """
    a, q = float(a), float(q)
    require(math.isfinite(a), f"a must be finite, got a={a!r}")
    require(abs(q) < 1, f"q_pochhammer needs |q| < 1, got q={q!r}")
    tol = _check_tol(tol)
    value, qk, k = 1.0, 1.0, 0
    while True:
        value *= 1.0 - a * qk
        qk *= q
        k += 1
        err = abs(value) * math.expm1(abs(a) * abs(qk) / (1.0 - abs(q)))
        if err < tol:
            return PochhammerResult(value, err, k)
        if k >= MAX_FACTORS:
            raise ThetaConvergenceError(f"q_pochhammer did not converge in {MAX_FACTORS} factors (q={q})")


def q_pochhammer_multi(a_values: Iterable[float], q: float, tol: float) -> PochhammerResult:
    """(a_1, ..., a_m; q)_inf as a product of single symbols"""
    parts = [q_pochhammer(a, q, tol) for a in a_values]
    require(bool(parts), "q_pochhammer_multi needs at least one a")
    value = math.prod(p.value for p in parts)
    # |prod(x_i + e_i) - prod(x_i)| <= prod(|x_i| + |e_i|) - prod(|x_i|)
    err = math.prod(abs(p.value) + p.err_bound for p in parts) - abs(value)
    return PochhammerResult(value, err, sum(p.factors_used for p in parts))


def _series_integer_index(kind: ThetaKind, w: float, nome: Nome, log_tol: float,
                          fixed_terms: Optional[int]) -> tuple[ScaledReal, int, ScaledReal]:
    # theta3 / theta4 with period-1 reduced argument w
    def log_tail(n: int) -> float:
        return LN2 + (n + 1) ** 2 * nome.log_q - math.log(nome.one_minus_power(2 * n + 3))

    terms = [1.0]
    n = 0
    while ((n + 1 < fixed_terms) if fixed_terms is not None
           else log_tail(n) >= log_tol + log_reference(math.fsum(terms))):
        n += 1
        if n > MAX_TERMS:
            raise ThetaConvergenceError(f"theta series did not converge in {MAX_TERMS} terms (t={nome.t})")
        term = 2.0 * nome.power(n * n) * cospi(2 * n * w)
        terms.append(-term if kind is ThetaKind.THETA4 and n % 2 else term)
    return ScaledReal.from_float(math.fsum(terms)), n + 1, ScaledReal.exp(log_tail(n))


def _series_half_index(kind: ThetaKind, w: float, nome: Nome, log_tol: float,
                       fixed_terms: Optional[int]) -> tuple[ScaledReal, int, ScaledReal]:
    # theta1 / theta2 as 2 q^{1/4} sum q^{n^2+n} (...); tolerance relative to 2 q^{1/4}
    def log_rel_tail(n: int) -> float:
        return n * (n + 1) * nome.log_q - math.log(nome.one_minus_power(2 * n + 2))

    terms = []
    n = 0
    while True:
        weight = nome.power(n * (n + 1))
        if kind is ThetaKind.THETA1:
            terms.append((-weight if n % 2 else weight) * sinpi((2 * n + 1) * w))
        else:
            terms.append(weight * cospi((2 * n + 1) * w))
        n += 1
        if fixed_terms is not None:
            if n >= fixed_terms:
                break
        elif log_rel_tail(n) < log_tol + log_reference(math.fsum(terms)):
            break
        if n > MAX_TERMS:
            raise ThetaConvergenceError(f"theta series did not converge in {MAX_TERMS} terms (t={nome.t})")
    scale = LN2 + 0.25 * nome.log_q
    total = math.fsum(terms)
    value = ScaledReal.zero() if total == 0.0 else ScaledReal(1 if total > 0 else -1, scale + math.log(abs(total)))
    return value, n, ScaledReal.exp(scale + log_rel_tail(n))


def theta_series(kind: ThetaKind, v: float, t: float, tol: float = 1e-12,
                 *, fixed_terms: Optional[int] = None) -> EvalReport:
    """theta_kind(v | it) by its sum form

    Stops at the first N whose tail bound 2 q^{(N+1)^2}/(1 - q^{2N+3}) (or the
    half-integer-index analogue) drops below tol times the leading-term scale
    (1 for theta3/theta4, 2 q^{1/4} for theta1/theta2) and times the partial
    sum when that is smaller, so values near a zero keep tol relative accuracy
    down to REL_FLOOR. `fixed_terms` forces the number of terms instead.
    """
    kind = ThetaKind.parse(kind)
    v = _check_v(v)
    nome = Nome(float(t))
    log_tol = math.log(_check_tol(tol))
    if nome.t < get_settings().series_floor:
        log.warning("direct series at t=%g is below the advertised floor %g; prefer theta_auto",
                    nome.t, get_settings().series_floor)
    d = decompose(v)
    if kind in (ThetaKind.THETA3, ThetaKind.THETA4):
        value, used, tail = _series_integer_index(kind, d.nearest_rem, nome, log_tol, fixed_terms)
    else:
        value, used, tail = _series_half_index(kind, d.nearest_rem, nome, log_tol, fixed_terms)
        if d.nearest_int % 2:
            value = -value
    return EvalReport(value=value, terms_used=used, tail_bound=tail, method=Method.DIRECT_SERIES)


def theta_product(kind: ThetaKind, v: float, t: float, tol: float = 1e-12) -> EvalReport:
    """theta_kind(v | it) by the triple product

    Paired factors are written as (1-a)^2 + 4a cos^2(pi v) or (1-a)^2 + 4a sin^2(pi v),
    so no factor cancels. Each remaining factor differs from 1 by at most 7 x_k
    (x_k = q^{2k-1} for theta3/theta4, q^{2k} for theta1/theta2); the loop stops
    when |partial| * expm1(7 sum_{k>K} x_k) < tol.
    """
    kind = ThetaKind.parse(kind)
    v = _check_v(v)
    nome = Nome(float(t))
    log_tol = math.log(_check_tol(tol))
    s, c = sinpi(v), cospi(v)
    if kind in (ThetaKind.THETA3, ThetaKind.THETA4):
        odd, trig2 = 1, (c * c if kind is ThetaKind.THETA3 else s * s)
    else:
        odd, trig2 = 0, (s * s if kind is ThetaKind.THETA1 else c * c)
    # factor k pairs x_k = q^{2k-odd}
    rest_ratio = 7.0 / nome.one_minus_power(2)
    log_partial = 0.0
    k = 0
    while True:
        k += 1
        e = 2 * k - odd
        one_minus_x = nome.one_minus_power(e)
        log_partial += math.log(nome.one_minus_power(2 * k))
        log_partial += math.log(one_minus_x * one_minus_x + 4.0 * nome.power(e) * trig2)
        log_err = log_partial + _log0(math.expm1(rest_ratio * nome.power(e + 2)))
        if log_err < log_tol:
            break
        if k >= MAX_FACTORS:
            raise ThetaConvergenceError(f"theta product did not converge in {MAX_FACTORS} factors (t={nome.t})")
    if odd:
        value = ScaledReal.exp(log_partial)
        tail = ScaledReal.exp(log_err)
    else:
        trig = s if kind is ThetaKind.THETA1 else c
        if trig == 0.0:
            value, tail = ScaledReal.zero(), ScaledReal.zero()
        else:
            prefactor = LN2 + 0.25 * nome.log_q + math.log(abs(trig))
            value = ScaledReal(1 if trig > 0 else -1, prefactor + log_partial)
            tail = ScaledReal.exp(prefactor + log_err)
    return EvalReport(value=value, terms_used=k, tail_bound=tail, method=Method.PRODUCT)


def series_scale(kind: ThetaKind, t: float) -> ScaledReal:
    """Leading-term magnitude the direct-series tolerance is relative to"""
    kind = ThetaKind.parse(kind)
    if kind in (ThetaKind.THETA3, ThetaKind.THETA4):
        return ScaledReal.one()
    return ScaledReal.exp(LN2 + 0.25 * Nome(float(t)).log_q)
