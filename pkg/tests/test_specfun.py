import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from octantwave import AccuracyBudget, gamma_fn, bessel_i, bessel_i_scaled, pochhammer, gauss_2f1_series
from octantwave.errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    OverflowRangeError,
    PoleError,
)
from octantwave.specfun import log_abs_gamma, pochhammer_log

SQRT_PI = math.sqrt(math.pi)


class TestGamma:
    def test_half_integer(self):
        assert gamma_fn(0.5) == pytest.approx(SQRT_PI, rel=1e-14)

    def test_factorial(self):
        assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)

    def test_three_and_a_half(self):
        # recurrence up from Gamma(1/2)
        assert gamma_fn(3.5) == pytest.approx(15.0 * SQRT_PI / 8.0, rel=1e-13)

    def test_poles_raise(self):
        for x in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                gamma_fn(x)

    def test_accuracy_window(self, rng):
        for _ in range(300):
            x = rng.uniform(-30.0, 30.0)
            if x < 0.5 and abs(x - round(x)) < 1e-3:
                continue
            ref = float(mp.gamma(x))
            assert gamma_fn(x) == pytest.approx(ref, rel=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(st.floats(min_value=0.05, max_value=10.0))
    def test_duplication(self, z):
        lhs = 2.0 ** (2 * z - 1) * gamma_fn(z) * gamma_fn(z + 0.5)
        rhs = SQRT_PI * gamma_fn(2 * z)
        assert abs(lhs - rhs) / abs(rhs) <= 1e-11

    @settings(max_examples=80, deadline=None)
    @given(st.floats(min_value=0.1, max_value=20.0))
    def test_recurrence(self, z):
        assert gamma_fn(z + 1.0) == pytest.approx(z * gamma_fn(z), rel=1e-12)

    def test_log_abs_gamma_sign(self):
        lg, sign = log_abs_gamma(-1.5)   # Gamma(-1.5) = 4 sqrt(pi)/3 > 0
        assert sign == 1.0
        assert math.exp(lg) == pytest.approx(4.0 * SQRT_PI / 3.0, rel=1e-12)
        _, sign = log_abs_gamma(-0.5)    # Gamma(-1/2) = -2 sqrt(pi)
        assert sign == -1.0


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(12.7, 0) == 1.0
        assert pochhammer(-3.0, 0) == 1.0

    def test_small_integers(self):
        assert pochhammer(3.0, 2) == 12.0
        assert pochhammer(0.8, 3) == pytest.approx(0.8 * 1.8 * 2.8, rel=1e-15)

    def test_zero_factor(self):
        assert pochhammer(-2.0, 5) == 0.0

    def test_gamma_consistency(self, rng):
        for _ in range(100):
            a = rng.uniform(0.1, 5.0)
            n = int(rng.integers(0, 60))
            lhs = pochhammer(a, n)
            rhs = math.exp(log_abs_gamma(a + n)[0] - log_abs_gamma(a)[0])
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_log_space_path(self):
        # n > 30 goes through the log accumulator
        val = pochhammer(1.3, 80)
        assert val == pytest.approx(float(mp.rf(1.3, 80)), rel=1e-12)

    def test_negative_base_sign(self):
        val = pochhammer(-4.5, 40)
        assert val == pytest.approx(float(mp.rf(-4.5, 40)), rel=1e-11)
        log_abs, sign = pochhammer_log(-4.5, 40)
        assert sign == math.copysign(1.0, val)

    def test_overflow_reported(self):
        with pytest.raises(OverflowRangeError):
            pochhammer(2.5, 400)

    def test_negative_n_rejected(self):
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)


class TestBesselI:
    def test_half_order_closed_form(self):
        assert bessel_i(0.5, 1.0) == pytest.approx(
            math.sqrt(2.0 / math.pi) * math.sinh(1.0), rel=1e-12)

    def test_three_halves_closed_form(self):
        for x in (0.4, 2.0, 9.0, 25.0):
            ref = math.sqrt(2.0 / (math.pi * x)) * (math.cosh(x) - math.sinh(x) / x)
            assert bessel_i(1.5, x) == pytest.approx(ref, rel=1e-10)

    def test_zero_argument(self):
        assert bessel_i(0.7, 0.0) == 0.0
        assert bessel_i(0.0, 0.0) == 1.0
        assert bessel_i(-0.25, 0.0) == math.inf

    def test_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            bessel_i(0.5, -1.0)

    def test_against_integral_representation(self):
        # independent oracle: I_nu(z) = (2z)^nu e^-z / (sqrt(pi) Gamma(nu+1/2))
        #                     * int_0^1 e^{2zt} [t(1-t)]^{nu-1/2} dt
        for nu, z in ((0.3, 2.0), (0.8, 1.3), (1.4, 4.0)):
            integral, _ = quad(lambda t: math.exp(2 * z * t) * (t * (1 - t)) ** (nu - 0.5), 0, 1)
            ref = (2 * z) ** nu * math.exp(-z) / (SQRT_PI * gamma_fn(nu + 0.5)) * integral
            assert bessel_i(nu, z) == pytest.approx(ref, rel=1e-9)

    def test_accuracy_window(self, rng):
        for _ in range(200):
            nu = rng.uniform(-0.5, 3.0)
            x = rng.uniform(0.0, 50.0)
            ref = float(mp.besseli(nu, x))
            if ref != 0.0:
                assert bessel_i(nu, x) == pytest.approx(ref, rel=1e-10)

    def test_crossover_overlap_band(self):
        from octantwave.specfun import _bessel_i_asymptotic, _bessel_i_series_scaled
        for x in (12.0, 15.0, 18.0):
            for nu in (-0.4, 0.0, 1.2, 2.5):
                series = (0.5 * x) ** nu * _bessel_i_series_scaled(nu, x)
                asym = _bessel_i_asymptotic(nu, x)
                assert abs(series - asym) / abs(series) <= 1e-10

    def test_scaled_even_and_finite_at_zero(self):
        assert bessel_i_scaled(0.3, -2.0) == pytest.approx(bessel_i_scaled(0.3, 2.0), rel=1e-15)
        assert bessel_i_scaled(0.3, 0.0) == pytest.approx(1.0 / gamma_fn(1.3), rel=1e-14)


class TestGauss2F1:
    def test_at_zero(self):
        assert gauss_2f1_series(2.3, 0.8, 1.6, 0.0) == 1.0

    def test_geometric(self):
        assert gauss_2f1_series(1.0, 0.7, 0.7, 0.4) == pytest.approx(1.0 / 0.6, rel=1e-12)

    def test_frozen_value(self):
        # brute-force oracle value, summed independently at high precision
        ref = float(mp.hyp2f1(2.0, 0.8, 1.6, -0.3))
        assert gauss_2f1_series(2.0, 0.8, 1.6, -0.3) == pytest.approx(ref, rel=1e-12)

    def test_divergent_argument(self):
        with pytest.raises(DivergenceError):
            gauss_2f1_series(1.0, 1.0, 2.0, 1.0)

    def test_denominator_pole(self):
        with pytest.raises(PoleError):
            gauss_2f1_series(1.0, 1.0, -2.0, 0.3)

    def test_budget_exhaustion(self):
        with pytest.raises(ConvergenceError):
            gauss_2f1_series(2.0, 1.5, 0.7, 0.999, AccuracyBudget(rel_tol=1e-14, max_terms=10))
