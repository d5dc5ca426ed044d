"""
Sum and product evaluators, q-Pochhammer symbols
"""
import logging
import math

import numpy as np
import pytest

from theta.contracts import Method, Nome, ThetaKind
from theta.core import (
    REL_FLOOR,
    log_reference,
    q_pochhammer,
    q_pochhammer_multi,
    series_scale,
    theta_product,
    theta_series,
)
from theta.errors import ThetaDomainError

THETA3_0_I = 1.0864348112133080146  # theta3(0 | i)
KINDS = list(ThetaKind)


def _close(a, b, rel):
    a, b = float(a), float(b)
    return abs(a - b) <= rel * max(abs(a), abs(b))


class TestNome:
    """Test suite for the nome q = e^{-pi t} kept in log space"""

    def test_log_space_accessors(self):
        """Test log_q, powers and 1 - q^e without a plain q attribute"""
        nome = Nome(2.0)
        assert nome.log_q == -2 * math.pi
        assert nome.power(0.25) == pytest.approx(math.exp(-math.pi / 2), rel=1e-15)
        assert nome.one_minus_power(1e-12) == pytest.approx(2 * math.pi * 1e-12, rel=1e-9)
        assert not hasattr(nome, "q")

    @pytest.mark.parametrize("t", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_t(self, t):
        """Test t must be finite and positive"""
        with pytest.raises(ThetaDomainError):
            Nome(t)


class TestPochhammer:
    """Test suite for (a; q)_inf and its multi-argument form"""

    def test_trivial_factor(self):
        """Test a = 0 gives exactly 1 after one factor"""
        r = q_pochhammer(0.0, 0.9, 1e-15)
        assert r.value == 1.0 and r.factors_used == 1 and r.err_bound == 0.0

    def test_half_half(self):
        """Test (1/2; 1/2)_inf against its known value"""
        r = q_pochhammer(0.5, 0.5, 1e-14)
        assert r.value == pytest.approx(0.288788095086602, abs=1e-12)
        assert r.err_bound < 1e-14

    def test_vanishing_factor(self):
        """Test a = 1 vanishes through the first factor"""
        assert q_pochhammer(1.0, 0.5, 1e-12).value == 0.0

    def test_negative_nome_and_multi(self):
        """Test the multi form equals the product of single symbols"""
        single = [q_pochhammer(a, -0.3, 1e-15).value for a in (0.5, -0.25)]
        multi = q_pochhammer_multi([0.5, -0.25], -0.3, 1e-15)
        assert multi.value == pytest.approx(single[0] * single[1], rel=1e-14)
        assert multi.err_bound >= 0.0

    @pytest.mark.parametrize("a, q, tol", [(0.5, 1.0, 1e-12), (0.5, -1.2, 1e-12), (0.5, 0.5, 0.0), (math.nan, 0.5, 1e-12)])
    def test_domain(self, a, q, tol):
        """Test |q| >= 1, tol <= 0 and NaN a are rejected"""
        with pytest.raises(ThetaDomainError):
            q_pochhammer(a, q, tol)


class TestThetaSeries:
    """Test suite for the direct trigonometric series"""

    def test_values_at_t_one(self):
        """Test closed-form values at tau = i"""
        assert theta_series(1, 0.0, 0.7).value.is_zero
        assert float(theta_series(3, 0.0, 1.0).value) == pytest.approx(THETA3_0_I, rel=1e-14)
        # theta2(0 | i) = 2^{-1/4} theta3(0 | i)
        assert float(theta_series(2, 0.0, 1.0).value) == pytest.approx(THETA3_0_I * 2 ** -0.25, rel=1e-14)
        assert float(theta_series(4, 0.5, 1.0).value) == pytest.approx(THETA3_0_I, rel=1e-14)

    def test_report_shape(self):
        """Test method, term count and tail bound of a report"""
        r = theta_series("theta3", 0.1, 2.0, 1e-12)
        assert r.method is Method.DIRECT_SERIES
        assert r.terms_used >= 1
        assert r.tail_bound.sign == 1 and float(r.tail_bound) < 1e-12

    def test_rejects_bad_arguments(self):
        """Test non-positive t, NaN v, negative tol and bad kind"""
        for kwargs in ({"t": 0.0}, {"t": -1.0}, {"t": math.inf}, {"v": math.nan}, {"tol": -1.0}):
            args = {"kind": 3, "v": 0.2, "t": 1.0, "tol": 1e-12, **kwargs}
            with pytest.raises(ThetaDomainError):
                theta_series(**args)
        with pytest.raises(ThetaDomainError):
            theta_series(5, 0.0, 1.0)

    def test_warns_below_floor(self, caplog):
        """Test a warning is logged below the series floor"""
        with caplog.at_level(logging.WARNING, logger="theta.core"):
            theta_series(3, 0.3, 0.01)
        assert "below the advertised floor" in caplog.text

    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("v, t", [(0.3, 0.5), (-1.7, 1.0), (2.2, 3.0), (0.05, 0.8)])
    def test_truncation_is_honest(self, kind, v, t):
        """Test doubling the terms moves the value by at most the tail bound"""
        coarse = theta_series(kind, v, t, 1e-6)
        fine = theta_series(kind, v, t, fixed_terms=2 * coarse.terms_used)
        gap = abs(float(coarse.value) - float(fine.value))
        assert gap <= float(coarse.tail_bound) * (1 + 1e-9) + 1e-15

    @pytest.mark.parametrize("kind, v, t", [
        (1, -1.979, 1.51),
        (2, -1.418, 4.45),
        (1, 3e-4, 1.2),
        (2, 0.4997, 2.5),
    ])
    def test_relative_accuracy_near_zeros(self, kind, v, t):
        """Test tol is met relative to the value close to a zero"""
        coarse = theta_series(kind, v, t, 1e-12)
        fine = theta_series(kind, v, t, fixed_terms=coarse.terms_used + 4)
        assert _close(coarse.value, fine.value, 1e-12)

    @pytest.mark.parametrize("v", [0.3, 1.15, -0.45])
    def test_quasi_periodicity_and_parity(self, v):
        """Test v -> v + 1 and v -> -v symmetries of all four kinds"""
        t = 0.9
        for kind, shift_sign in ((1, -1), (2, -1), (3, 1), (4, 1)):
            base = float(theta_series(kind, v, t).value)
            assert float(theta_series(kind, v + 1, t).value) == pytest.approx(shift_sign * base, rel=1e-13)
        assert float(theta_series(1, -v, t).value) == pytest.approx(-float(theta_series(1, v, t).value), rel=1e-13)
        for kind in (2, 3, 4):
            assert float(theta_series(kind, -v, t).value) == pytest.approx(float(theta_series(kind, v, t).value), rel=1e-13)

    def test_theta4_is_shifted_theta3(self):
        """Test theta4(v + 1/2) = theta3(v)"""
        for v in (0.0, 0.21, -0.8):
            assert float(theta_series(4, v + 0.5, 1.3).value) == pytest.approx(float(theta_series(3, v, 1.3).value), rel=1e-13)

    def test_series_scale(self):
        """Test the leading-term scale 1 or 2 q^{1/4}"""
        assert series_scale(3, 2.0).log_mag == 0.0
        assert float(series_scale(1, 2.0)) == pytest.approx(2 * math.exp(-math.pi * 2.0 / 4), rel=1e-15)

    def test_log_reference(self):
        """Test the partial-sum reference is capped at 1 and floored"""
        assert log_reference(3.5) == 0.0
        assert log_reference(-0.25) == pytest.approx(math.log(0.25), rel=1e-15)
        assert log_reference(0.0) == pytest.approx(math.log(REL_FLOOR), rel=1e-15)


class TestThetaProduct:
    """Test suite for the triple-product evaluator"""

    def test_zeros_and_values(self):
        """Test exact zeros and theta3(0 | i) through the product"""
        assert theta_product(1, 0.0, 1.0).value.is_zero
        assert theta_product(2, 0.5, 1.0).value.is_zero
        r = theta_product(3, 0.0, 1.0, 1e-14)
        assert r.method is Method.PRODUCT
        assert float(r.value) == pytest.approx(THETA3_0_I, rel=1e-13)

    @pytest.mark.slow
    def test_triple_product_identity(self):
        """Test series and product agree on a 21 x 11 grid over [-2, 2] x [0.5, 5]"""
        for kind in KINDS:
            for t in np.linspace(0.5, 5.0, 11):
                for v in np.linspace(-2.0, 2.0, 21):
                    a = theta_series(kind, float(v), float(t)).value
                    b = theta_product(kind, float(v), float(t)).value
                    assert a.sign == b.sign, (kind, v, t)
                    assert _close(a, b, 1e-11), (kind, v, t, a, b)
