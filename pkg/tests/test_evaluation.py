"""
Tests for the evaluation module: series, scaling, oracle and the public
function routines.
"""

import json
import math
import warnings

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from lommelkit.core.config import EvalOptions
from lommelkit.core.errors import DomainError, GammaPoleDegeneracy, NonConvergence, NormalizationPole
from lommelkit.core.logging import configure_logging
from lommelkit.core.types import OrderPair
from lommelkit.modules.evaluation import functions, oracle
from lommelkit.modules.evaluation.functions import (
    bessel_i,
    coeff_a,
    condition_number,
    condition_number_forms,
    lommel_t,
    lommel_t_tilde,
    lommel_T_tilde,
    ratio_b,
    ratio_h,
    ratio_r,
    ratio_xy,
    struve_l,
    struve_m,
    t_tilde_derivative,
)

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

CONDITION_GRID = [
    ("lommel_t_tilde", 0.0, 0.0, 0.5),
    ("lommel_t_tilde", 0.5, 0.5, 1.0),
    ("lommel_t_tilde", 2.0, 1.0, 3.0),
    ("lommel_t_tilde", 1.5, -0.5, 10.0),
    ("lommel_t_tilde", 2.0, 1.0, 80.0),
    ("lommel_t_tilde", 5.0, 2.0, 60.0),
    ("bessel_i", 0.5, 0.5, 1.0),
    ("bessel_i", 3.5, 3.5, 20.0),
    ("bessel_i", 2.0, 2.0, 70.0),
]


class TestBesselI:
    """I_ν(x) from its power series"""

    def test_half_order_closed_form(self, opts):
        ev = bessel_i(0.5, 1.0, opts)
        assert ev.value == pytest.approx(SQRT_2_OVER_PI * math.sinh(1.0), rel=1e-14)
        assert ev.converged
        assert ev.tail_bound <= opts.rel_tol
        assert ev.terms_used <= opts.max_terms

    def test_small_argument_limit(self, opts):
        assert bessel_i(0.0, 1e-8, opts).value == pytest.approx(1.0, rel=1e-14)

    def test_negative_integer_order(self, opts):
        assert bessel_i(-2.0, 3.0, opts).value == bessel_i(2.0, 3.0, opts).value

    @settings(max_examples=100, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=10.0),
        st.floats(min_value=0.01, max_value=50.0),
    )
    def test_matches_scipy(self, nu, x):
        ev = bessel_i(nu, x, EvalOptions())
        assert ev.log_scale == 0.0
        assert ev.value == pytest.approx(special.iv(nu, x), rel=1e-12)

    @pytest.mark.parametrize("x", [50.5, 120.0, 500.0])
    def test_scaled_path(self, x, opts):
        ev = bessel_i(1.0, x, opts)
        assert ev.log_scale == x
        assert ev.value == pytest.approx(special.ive(1.0, x), rel=1e-12)

    def test_oracle_mode_agrees(self, opts, oracle_opts):
        assert bessel_i(2.5, 7.5, oracle_opts).value == pytest.approx(
            bessel_i(2.5, 7.5, opts).value, rel=1e-14
        )

    def test_rejects_nonpositive_argument(self, opts):
        with pytest.raises(DomainError):
            bessel_i(1.0, 0.0, opts)

    def test_term_budget_exhausted(self):
        with pytest.raises(NonConvergence) as exc_info:
            bessel_i(0.0, 100.0, EvalOptions(max_terms=16))
        assert exc_info.value.exit_code == 3
        assert exc_info.value.terms_used >= 16


class TestLommelTTilde:
    """Normalized modified Lommel function t̃_{μ,ν}"""

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 1.0, 2.5, 10.0])
    def test_reduces_to_bessel(self, nu, opts):
        t = lommel_t_tilde(OrderPair(nu - 1.0, nu), 2.0, opts).value
        assert t == pytest.approx(bessel_i(nu, 2.0, opts).value, rel=2 * opts.rel_tol)

    @pytest.mark.parametrize("nu", [0.5, 2.0, 4.5])
    def test_second_bessel_reduction_warns(self, nu, opts):
        with pytest.warns(GammaPoleDegeneracy):
            ev = lommel_t_tilde(OrderPair(nu - 3.0, nu), 3.0, opts)
        assert "gamma_pole" in ev.flags
        assert ev.value == pytest.approx(bessel_i(nu, 3.0, opts).value, rel=1e-14)

    def test_struve_special_case(self, opts):
        assert lommel_t_tilde(OrderPair(0.0, 0.0), 1.0, opts).value == struve_l(0.0, 1.0, opts).value

    def test_struve_half_order_closed_form(self, opts):
        expected = SQRT_2_OVER_PI * (math.cosh(1.0) - 1.0)
        assert struve_l(0.5, 1.0, opts).value == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 1.0, 3.5])
    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 15.0])
    def test_struve_matches_scipy(self, nu, x, opts):
        assert struve_l(nu, x, opts).value == pytest.approx(special.modstruve(nu, x), rel=1e-9)

    def test_struve_leading_term(self, opts):
        nu, x = 1.5, 1e-6
        leading = (x / 2) ** (nu + 1) / (special.gamma(1.5) * special.gamma(nu + 1.5))
        assert struve_l(nu, x, opts).value == pytest.approx(leading, rel=1e-10)

    def test_struve_order_below_range(self, opts):
        with pytest.raises(DomainError, match="nu >= -3/2"):
            struve_l(-2.0, 1.0, opts)

    @settings(max_examples=60, deadline=None)
    @given(
        st.floats(min_value=-1.5, max_value=15.0),
        st.floats(min_value=0.0, max_value=16.0),
        st.floats(min_value=0.01, max_value=60.0),
    )
    def test_symmetric_in_nu(self, mu, nu, x):
        p = OrderPair(mu, nu)
        if not p.series_positive:
            return
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GammaPoleDegeneracy)
            plus = lommel_t_tilde(p, x).true_value()
            minus = lommel_t_tilde(OrderPair(mu, -nu), x).true_value()
        assert minus == pytest.approx(plus, rel=2e-15, abs=1e-300)

    @settings(max_examples=80, deadline=None)
    @given(
        st.floats(min_value=-2.9, max_value=15.0),
        st.floats(min_value=0.0, max_value=16.0),
        st.floats(min_value=1e-3, max_value=1000.0),
    )
    def test_positive_when_series_positive(self, mu, nu, x):
        p = OrderPair(mu, nu)
        if not p.series_positive:
            return
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GammaPoleDegeneracy)
            ev = lommel_t_tilde(p, x)
        assert ev.value > 0.0
        assert "sign_not_guaranteed" not in ev.flags

    def test_flags_unguaranteed_sign(self, opts):
        ev = lommel_t_tilde(OrderPair(-2.0, 2.5), 1.0, opts)
        assert "sign_not_guaranteed" in ev.flags

    @pytest.mark.parametrize("x", [30.0, 45.0, 60.0])
    def test_scaled_and_unscaled_agree(self, x):
        scaled = lommel_t_tilde(OrderPair(2.0, 1.0), x, EvalOptions(scaling_threshold=20.0))
        plain = lommel_t_tilde(OrderPair(2.0, 1.0), x, EvalOptions(scaling_threshold=100.0))
        assert scaled.log_scale == x
        assert plain.log_scale == 0.0
        assert scaled.true_value() == pytest.approx(plain.value, rel=1e-13)

    def test_large_argument_stays_finite(self, opts):
        ev = lommel_t_tilde(OrderPair(2.0, 0.0), 500.0, opts)
        assert ev.log_scale == 500.0
        assert math.isfinite(ev.value) and ev.value > 0.0
        assert ev.log_value() == pytest.approx(float(mpmath.log(oracle.t_tilde(2.0, 0.0, 500.0, 260))), rel=1e-14)

    def test_oracle_and_float_agree(self, opts, oracle_opts):
        p = OrderPair(2.0, 0.0)
        assert lommel_t_tilde(p, 2.5, oracle_opts).value == pytest.approx(
            lommel_t_tilde(p, 2.5, opts).value, rel=1e-14
        )


class TestLommelT:
    """Unnormalized t_{μ,ν} = 2^{μ-1}Γ((μ-ν+1)/2)Γ((μ+ν+1)/2)·t̃_{μ,ν}"""

    def test_half_order_closed_form(self, opts):
        k = 2.0**-0.5 * special.gamma(0.5) * special.gamma(1.5)
        expected = k * SQRT_2_OVER_PI * (math.cosh(1.0) - 1.0)
        assert lommel_t(OrderPair(0.5, 0.5), 1.0, opts).value == pytest.approx(expected, rel=1e-14)

    def test_shift_ratio(self, opts):
        p = OrderPair(3.0, 1.0)
        q = p.shifted(-1.0, -1.0)
        lhs = lommel_t(p, 5.0, opts).value / lommel_t(q, 5.0, opts).value
        rhs = (p.mu + p.nu - 1.0) * lommel_t_tilde(p, 5.0, opts).value / lommel_t_tilde(q, 5.0, opts).value
        assert lhs == pytest.approx(rhs, rel=1e-13)

    def test_normalization_pole(self, opts):
        with pytest.raises(NormalizationPole):
            lommel_t(OrderPair(0.0, 1.0), 1.0, opts)


class TestLommelTTildeSecondKind:
    """T̃_{μ,ν} = t̃_{μ,ν} - I_ν"""

    def test_struve_m_definition(self, opts):
        expected = struve_l(1.0, 2.0, opts).value - bessel_i(1.0, 2.0, opts).value
        assert struve_m(1.0, 2.0, opts).value == pytest.approx(expected, rel=1e-13)

    def test_large_argument_cancellation(self, oracle_opts):
        x = 40.0
        ev = lommel_T_tilde(OrderPair(0.0, 0.0), x, oracle_opts)
        assert "cancellation" in ev.flags
        assert ev.cancellation_digits > 6.0
        assert ev.value < 0.0
        assert ev.value == pytest.approx(-2.0 / (math.pi * x), rel=2e-3)

    def test_difference_of_oracle_values(self, oracle_opts):
        p = OrderPair(2.0, 0.0)
        with mpmath.mp.workdps(60):
            expected = float(oracle.t_tilde(2.0, 0.0, 1.0, 60) - oracle.bessel_i(0.0, 1.0, 60))
        assert lommel_T_tilde(p, 1.0, oracle_opts).value == pytest.approx(expected, rel=1e-14)


class TestCoeffA:
    def test_vanishes_on_exceptional_lines(self):
        assert coeff_a(OrderPair(1.0, 2.0), 3.0) == 0.0
        assert coeff_a(OrderPair(-4.0, 1.0), 3.0) == 0.0

    @pytest.mark.parametrize("mu,nu,vanishes", [
        (1.0, 2.0, True),
        (0.0, 3.0, True),
        (-4.0, 1.0, True),
        (1.0, 3.0, False),
        (2.0, 0.5, False),
        (-1.5, 0.5, False),
    ])
    def test_exceptional_line_predicate(self, mu, nu, vanishes):
        assert OrderPair(mu, nu).a_vanishes is vanishes

    def test_direct_substitution(self):
        assert coeff_a(OrderPair(2.0, 0.0), 2.0) == pytest.approx(8.0 / (3.0 * math.pi), rel=1e-14)

    def test_struve_form(self):
        nu, x = 1.5, 2.0
        expected = (x / 2) ** nu / (math.sqrt(math.pi) * special.gamma(nu + 1.5))
        assert coeff_a(OrderPair(nu, nu), x) == pytest.approx(expected, rel=1e-14)


class TestRatioB:
    """b_{μ,ν}(x) = x·a_{μ,ν}(x)/(2t̃_{μ,ν}(x))"""

    def test_small_argument_limit(self, opts):
        assert ratio_b(OrderPair(2.0, 0.0), 1e-9, opts) == pytest.approx(1.5, abs=1e-6)

    @pytest.mark.parametrize("x", [0.5, 2.0, 20.0])
    def test_equality_case_csch(self, x, opts):
        expected = 0.5 * x / math.sinh(x)
        assert ratio_b(OrderPair(-0.5, -0.5), x, opts) == pytest.approx(expected, rel=1e-13)

    def test_matches_definition(self, opts, oracle_opts):
        p, x = OrderPair(2.0, 0.0), 5.0
        direct = x * coeff_a(p, x) / (2.0 * lommel_t_tilde(p, x, opts).value)
        assert ratio_b(p, x, opts) == pytest.approx(direct, rel=1e-13)
        assert ratio_b(p, x, oracle_opts) == pytest.approx(direct, rel=1e-13)

    def test_bounded_and_decreasing_in_x(self, opts):
        p = OrderPair(1.5, 0.5)
        values = [ratio_b(p, x, opts) for x in (0.1, 1.0, 5.0, 20.0, 60.0, 200.0)]
        assert all(0.0 < v < 1.0 for v in values)
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_increasing_in_mu(self, opts):
        values = [ratio_b(OrderPair(mu, 1.0), 3.0, opts) for mu in (0.5, 1.0, 2.0, 5.0)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_outside_domain(self, opts):
        with pytest.raises(DomainError):
            ratio_b(OrderPair(-2.5, 0.0), 1.0, opts)


class TestDerivativeAndConditionNumber:
    @pytest.mark.parametrize("mu,nu,x", [(0.0, 0.0, 1.0), (2.0, 1.0, 3.0), (1.5, -0.5, 10.0)])
    def test_matches_finite_difference(self, mu, nu, x, opts):
        p = OrderPair(mu, nu)
        h = 1e-6 * x
        fd = (lommel_t_tilde(p, x + h, opts).value - lommel_t_tilde(p, x - h, opts).value) / (2 * h)
        assert t_tilde_derivative(p, x, opts) == pytest.approx(fd, rel=1e-6)

    def test_matches_termwise_oracle(self, opts):
        expected = float(oracle.t_tilde_derivative(0.0, 0.0, 1.0))
        assert t_tilde_derivative(OrderPair(0.0, 0.0), 1.0, opts) == pytest.approx(expected, rel=1e-13)

    def test_bessel_reduction(self, opts):
        nu, x = 1.5, 2.0
        expected = 0.5 * (bessel_i(nu - 1.0, x, opts).value + bessel_i(nu + 1.0, x, opts).value)
        assert t_tilde_derivative(OrderPair(nu - 1.0, nu), x, opts) == pytest.approx(expected, rel=1e-13)

    def test_bessel_half_order(self, opts):
        expected = 1.0 / math.tanh(1.0) - 0.5
        assert condition_number("bessel_i", OrderPair(0.5, 0.5), 1.0, opts) == pytest.approx(expected, rel=1e-12)

    def test_small_argument_limit(self, opts):
        assert condition_number("lommel_t_tilde", OrderPair(2.0, 1.0), 1e-4, opts) == pytest.approx(3.0, rel=1e-6)

    def test_scaled_argument(self, opts, oracle_opts):
        p = OrderPair(2.0, 1.0)
        assert condition_number("lommel_t_tilde", p, 80.0, opts) == pytest.approx(
            condition_number("lommel_t_tilde", p, 80.0, oracle_opts), rel=1e-12
        )

    @pytest.mark.parametrize("kind,mu,nu,x", CONDITION_GRID)
    def test_downward_and_upward_forms_agree(self, kind, mu, nu, x, opts):
        down, up = condition_number_forms(kind, OrderPair(mu, nu), x, opts)
        assert down == pytest.approx(up, rel=1e-12)
        assert condition_number(kind, OrderPair(mu, nu), x, opts) == down

    def test_forms_on_scaled_path(self, opts):
        assert lommel_t_tilde(OrderPair(5.0, 2.0), 60.0, opts).log_scale == 60.0
        down, up = condition_number_forms("lommel_t_tilde", OrderPair(5.0, 2.0), 60.0, opts)
        assert down == pytest.approx(up, rel=1e-12)

    def test_no_crosscheck_mismatch_logged(self, tmp_path, opts):
        configure_logging("WARNING", log_dir=str(tmp_path), enable_file_logging=True, enable_console_logging=False)
        try:
            for kind, mu, nu, x in CONDITION_GRID:
                condition_number(kind, OrderPair(mu, nu), x, opts)
        finally:
            configure_logging("ERROR")
        log_file = tmp_path / "lommelkit.log"
        text = log_file.read_text(encoding="utf-8") if log_file.exists() else ""
        assert "condition_number_crosscheck_mismatch" not in text

    def test_crosscheck_mismatch_is_logged(self, tmp_path, opts, monkeypatch):
        monkeypatch.setattr(functions, "CONDITION_CROSSCHECK_TOL", -1.0)
        configure_logging("WARNING", log_dir=str(tmp_path), enable_file_logging=True, enable_console_logging=False)
        try:
            condition_number("lommel_t_tilde", OrderPair(2.0, 1.0), 3.0, opts)
        finally:
            configure_logging("ERROR")
        records = [json.loads(line) for line in (tmp_path / "lommelkit.log").read_text(encoding="utf-8").splitlines()]
        assert [r["event"] for r in records] == ["condition_number_crosscheck_mismatch"]
        assert records[0]["kind"] == "lommel_t_tilde"

    def test_domain(self, opts):
        with pytest.raises(DomainError):
            condition_number("lommel_t_tilde", OrderPair(-2.0, 2.5), 1.0, opts)
        with pytest.raises(DomainError):
            condition_number("bessel_i", OrderPair(0.0, -1.5), 1.0, opts)


class TestRatios:
    @pytest.mark.parametrize("nu", [0.0, 1.0, 2.5])
    def test_h_equals_r_on_equality_line(self, nu, opts):
        assert ratio_h(OrderPair(nu - 1.0, nu), 2.5, opts) == pytest.approx(ratio_r(nu, 2.5, opts), rel=1e-14)

    def test_h_small_argument(self, opts):
        x = 1e-5
        assert ratio_h(OrderPair(2.0, 0.0), x, opts) == pytest.approx(x / 3.0, rel=1e-6)

    def test_common_scale(self, opts):
        p = OrderPair(2.0, 0.0)
        assert ratio_h(p, 600.0, opts) == pytest.approx(1.0, rel=1e-2)
        assert 0.0 < ratio_xy(p, 600.0, 700.0, opts) < 1e-40

    def test_ratio_xy_matches_values(self, opts):
        p = OrderPair(2.0, 1.0)
        expected = lommel_t_tilde(p, 1.0, opts).value / lommel_t_tilde(p, 2.0, opts).value
        assert ratio_xy(p, 1.0, 2.0, opts) == pytest.approx(expected, rel=1e-15)


class TestNormalizationConstant:
    def test_value(self):
        expected = 2.0**2 * special.gamma(1.5) * special.gamma(2.5)
        assert functions.normalization_constant(OrderPair(3.0, 1.0)) == pytest.approx(expected, rel=1e-14)
