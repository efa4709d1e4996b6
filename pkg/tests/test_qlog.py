import math

import mpmath
import pytest

from eulerq.errors import DivergentSeries, DomainError, MaxTermsExceeded
from eulerq.qcore import residual
from eulerq.qlog import (
    GKernel,
    SqFunction,
    g_kernel,
    probe_bases,
    qlog_limit_probe,
    within_series_disc,
)

POINTS = [0.5, -0.7, 0.3 + 0.4j, 1.5, -1.2j]


def s_q_oracle(x, q, terms=1500):
    with mpmath.workdps(40):
        x, q = mpmath.mpc(x), mpmath.mpf(q)
        total = mpmath.mpc(0)
        pochhammer = mpmath.mpc(1)
        for k in range(1, terms + 1):
            pochhammer *= 1 - x * q ** (k - 1)
            total -= q**k / (1 - q**k) * pochhammer
        return complex(total)


class TestSqFunction:
    def test_base_validation(self):
        with pytest.raises(ValueError):
            SqFunction(q=1)

    def test_unknown_form(self, make_sq):
        with pytest.raises(DomainError):
            make_sq["half"].s_q(0.5, form="product")

    @pytest.mark.parametrize("n", range(1, 21))
    def test_integer_at_inverse_powers(self, make_sq, n):
        assert make_sq["half"].s_q(2.0**n).value == pytest.approx(n, abs=1e-12)

    @pytest.mark.parametrize("name", ["tenth", "third", "seven"])
    def test_integer_at_inverse_powers_other_bases(self, make_sq, name):
        S = make_sq[name]
        q = S.q.q
        for n in range(1, 8):
            assert S.s_q(q**-n).value == pytest.approx(n, abs=1e-10)

    def test_zero_at_one(self, make_sq):
        for S in make_sq.values():
            assert S.s_q(1).value == 0

    def test_series_form_matches_reduction(self, make_sq):
        S = make_sq["half"]
        assert S.s_q(-3, form="series").value == pytest.approx(S.s_q(-3).value, rel=1e-12)

    def test_within_series_disc(self):
        assert within_series_disc(0.5j)
        assert within_series_disc(1.9)
        assert not within_series_disc(-1.5)

    def test_random_points_q_difference(self, make_sq, random_points):
        S = make_sq["half"]
        for x in random_points["disc"]:
            assert S.qrecur_residual(complex(x)).relative <= 1e-10


class TestClosedForms:
    @pytest.mark.parametrize("n", range(0, 9))
    def test_value_at_powers(self, make_sq, n):
        S = make_sq["half"]
        assert S.s_q(0.5**n).value == pytest.approx(S.s_q_at_qn(n).value, rel=1e-12, abs=1e-14)

    def test_value_at_q(self, make_sq):
        S = make_sq["third"]
        assert S.s_q_at_qn(1).value == pytest.approx(S.euler_recursion(1)[1], rel=1e-13)

    def test_euler_recursion(self, make_sq):
        S = make_sq["half"]
        values = S.euler_recursion(6)
        assert len(values) == 7
        assert values[0] == 0
        for n, value in enumerate(values):
            assert value == pytest.approx(S.s_q_at_qn(n).real, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_sequence_relation(self, make_sq, n):
        assert make_sq["seven"].euler_sequence_residual(n).relative <= 1e-10

    def test_sequence_relation_needs_two_terms(self, make_sq):
        with pytest.raises(DomainError):
            make_sq["half"].euler_sequence_residual(1)

    def test_negative_power(self, make_sq):
        with pytest.raises(DomainError):
            make_sq["half"].s_q_at_qn(-1)


class TestRepresentations:
    @pytest.mark.parametrize("x", POINTS)
    def test_taylor_series(self, make_sq, x):
        S = make_sq["half"]
        assert S.s_q_taylor(x).value == pytest.approx(S.s_q(x).value, rel=1e-11)

    @pytest.mark.parametrize("x", POINTS)
    def test_phi_taylor(self, make_sq, x):
        S = make_sq["half"]
        assert S.s_q_phi_taylor(x).value == pytest.approx(S.s_q(x).value, rel=1e-11)

    @pytest.mark.parametrize("x", POINTS)
    def test_phi32(self, make_sq, x):
        S = make_sq["third"]
        assert S.s_q_phi32(x).value == pytest.approx(S.s_q(x).value, rel=1e-11)

    @pytest.mark.parametrize("x", POINTS)
    def test_powers_of_x(self, make_sq, x):
        S = make_sq["half"]
        assert S.s_q_onemxk(x).value == pytest.approx(S.s_q(x).value, rel=1e-11)

    @pytest.mark.parametrize("x", [0.5, -0.7, 0.3 + 0.4j])
    def test_q_integral(self, make_sq, x):
        S = make_sq["half"]
        assert S.s_q_via_qintegral(x).value == pytest.approx(S.s_q(x).value, rel=1e-11)

    def test_q_integral_at_one(self, make_sq):
        assert make_sq["half"].s_q_via_qintegral(1).value == 0

    def test_taylor_coefficients(self, make_sq):
        S = make_sq["half"]
        assert S.taylor_coefficient(0) == pytest.approx(-S.zeta.zeta_q(1).real)
        assert S.taylor_coefficient(1) == pytest.approx(2.0)
        with pytest.raises(DomainError):
            S.taylor_coefficient(-1)

    def test_derivative_at_one(self, make_sq):
        S = make_sq["half"]
        h = 1e-5
        numeric = (S.s_q(1 + h).value - S.s_q(1 - h).value) / (2 * h)
        assert S.s_q_derivative_at_1().value == pytest.approx(numeric, rel=1e-8)


class TestRandomRepresentations:
    @pytest.mark.parametrize("name", ["tenth", "half", "ninth"])
    @pytest.mark.parametrize(
        "method",
        ["s_q_taylor", "s_q_phi_taylor", "s_q_phi32", "s_q_onemxk", "s_q_via_qintegral"],
    )
    def test_forms_agree_on_disc(self, make_sq, random_points, name, method):
        S = make_sq[name]
        form = getattr(S, method)
        for x in random_points["disc"]:
            x = complex(x)
            assert residual(form(x), S.s_q(x)).relative <= 1e-10

    @pytest.mark.parametrize("name", ["tenth", "half", "ninth"])
    def test_series_agrees_with_reduction(self, make_sq, random_points, name):
        S = make_sq[name]
        for x in random_points["disc"]:
            x = complex(x)
            assert residual(S.s_q(x, form="series"), S.s_q(x)).relative <= 1e-10

    @pytest.mark.parametrize("name", ["tenth", "half", "ninth"])
    def test_taylor_on_real_line(self, make_sq, random_points, name):
        S = make_sq[name]
        for x in random_points["real"]:
            x = float(x)
            assert residual(S.s_q_taylor(x), S.s_q(x)).relative <= 1e-10

    @pytest.mark.parametrize("x", [-3, -2.5])
    def test_reduction_error_within_estimate(self, make_sq, x):
        value = make_sq["ninth"].s_q(x)
        expected = s_q_oracle(x, 0.9)
        assert abs(value.value - expected) <= value.err_estimate
        assert value.value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("x", [-3, 2.8 + 1j])
    def test_taylor_near_oracle(self, make_sq, x):
        value = make_sq["ninth"].s_q_taylor(x)
        expected = s_q_oracle(x, 0.9)
        assert abs(value.value - expected) <= 1e-12 * value.mass


class TestKernel:
    @pytest.mark.parametrize("form", ["alternate", "phi21", "phi11"])
    @pytest.mark.parametrize("x, t", [(0.5, 0.4), (2, -0.6), (0.3 + 0.2j, 0.5j)])
    def test_forms_agree(self, make_sq, form, x, t):
        S = make_sq["half"]
        assert S.g_kernel(x, t, form=form).value == pytest.approx(
            S.g_kernel(x, t).value, rel=1e-12
        )

    def test_zero_x(self):
        kernel = GKernel(q=0.5, x=0, t=0.5)
        assert g_kernel(kernel).value == pytest.approx(2.0)

    def test_t_outside_disc(self, make_sq):
        with pytest.raises(DivergentSeries):
            make_sq["half"].g_kernel(0.5, 1.2)

    def test_model_rejects_t_outside_disc(self):
        with pytest.raises(ValueError):
            GKernel(q=0.5, x=0.5, t=-1)

    def test_unknown_form(self, make_sq):
        with pytest.raises(DomainError):
            make_sq["half"].g_kernel(0.5, 0.5, form="integral")


class TestDifferenceEquations:
    @pytest.mark.parametrize("x", POINTS + [2.7, -2.5 + 1j])
    def test_first_order(self, make_sq, x):
        assert make_sq["half"].qrecur_residual(x).relative <= 1e-10

    @pytest.mark.parametrize("x", POINTS)
    def test_second_order(self, make_sq, x):
        assert make_sq["seven"].second_order_residual(x).relative <= 1e-10

    @pytest.mark.parametrize("x", POINTS)
    def test_q_derivative(self, make_sq, x):
        assert make_sq["third"].qdiff_residual(x).relative <= 1e-9


class TestSummationFormulas:
    @pytest.mark.parametrize("n", range(0, 6))
    def test_both_families(self, make_sq, n):
        first, second = make_sq["half"].summation_residuals(n)
        assert first.relative <= 1e-10
        assert second.relative <= 1e-10

    def test_negative_n(self, make_sq):
        with pytest.raises(DomainError):
            make_sq["half"].summation_residuals(-1)


class TestGrowth:
    @pytest.mark.parametrize("r", [0.5, 2, 10])
    @pytest.mark.parametrize("name", ["third", "half", "seven"])
    def test_bounds_hold(self, make_sq, name, r):
        bounds = make_sq[name].growth_bounds(r)
        assert bounds.holds()
        assert bounds.lower <= bounds.m_r <= bounds.upper

    def test_check(self, make_sq):
        assert make_sq["half"].growth_bound_check(1.0)

    def test_radius_must_be_positive(self, make_sq):
        with pytest.raises(DomainError):
            make_sq["half"].growth_bounds(0)


class TestLimitProbe:
    def test_errors_shrink(self):
        errors = qlog_limit_probe(2, 6)
        assert len(errors) == 6
        assert errors[-1] < errors[0]
        assert errors[-1] < 0.05 * math.log(2)

    def test_method_ignores_own_base(self, make_sq):
        assert make_sq["half"].qlog_limit_probe(3, 2) == qlog_limit_probe(3, 2)

    def test_too_many_bases(self):
        with pytest.raises(MaxTermsExceeded):
            qlog_limit_probe(2, 21)

    def test_no_bases(self):
        with pytest.raises(DomainError):
            probe_bases(0)

    @pytest.mark.parametrize("x", [0, -1])
    def test_positive_x_only(self, x):
        with pytest.raises(DomainError):
            qlog_limit_probe(x, 2)
