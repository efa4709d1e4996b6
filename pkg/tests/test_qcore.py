import math

import mpmath
import pytest
from pydantic import ValidationError

from eulerq.errors import (
    DivergentSeries,
    DomainError,
    MaxTermsExceeded,
    PoleError,
)
from eulerq.qcore import (
    E_q,
    EvalConfig,
    QParam,
    Residual,
    SeriesValue,
    d_q,
    d_q_inv,
    e_q,
    finite_sum,
    qbinomial_coeff,
    qbinomial_finite_residual,
    qbinomial_theorem_residual,
    qpochhammer,
    qpochhammer_inf,
    reduction_steps,
    residual,
    sum_series,
    telescope_residual,
)


class TestQParam:
    @pytest.mark.parametrize("q", [0, 1, -0.5, 1.5])
    def test_base_outside_unit_interval(self, q):
        with pytest.raises(ValidationError):
            QParam(q=q)

    def test_inverse(self):
        assert QParam(q=0.25).inverse == 4.0

    def test_frozen(self):
        base = QParam(q=0.5)
        with pytest.raises(ValidationError):
            base.q = 0.3


class TestEvalConfig:
    def test_defaults(self, make_config):
        cfg = make_config["default"]
        assert cfg.eps == 1e-14
        assert cfg.min_terms == 8
        assert cfg.max_terms == 100000

    def test_from_env(self):
        cfg = EvalConfig.from_env(environ={"EULERQ_EPS": "1e-10", "EULERQ_MAX_TERMS": "500"})
        assert cfg.eps == 1e-10
        assert cfg.max_terms == 500

    def test_override_wins_over_env(self):
        cfg = EvalConfig.from_env(environ={"EULERQ_EPS": "1e-10"}, eps=1e-12, max_terms=None)
        assert cfg.eps == 1e-12
        assert cfg.max_terms == 100000

    def test_bad_env_value(self):
        with pytest.raises(ValidationError):
            EvalConfig.from_env(environ={"EULERQ_MAX_TERMS": "many"})

    def test_min_above_max(self):
        with pytest.raises(ValidationError):
            EvalConfig(min_terms=10, max_terms=5)

    def test_widened(self, make_config):
        cfg = make_config["tiny"]
        assert cfg.widened(50).max_terms == 50
        assert cfg.widened(3) is cfg


class TestSumSeries:
    def test_geometric_series(self):
        def terms():
            k = 0
            while True:
                yield 0.5**k
                k += 1

        total = sum_series(terms(), ratio_cap=0.5)
        assert total.value == pytest.approx(2.0, rel=1e-14)
        assert abs(total.value - 2) <= total.err_estimate
        assert total.terms_used >= 8

    def test_finite_iterable_is_exact(self):
        total = sum_series([1, 2, 3])
        assert total.value == 6
        assert total.terms_used == 3

    def test_max_terms(self, make_config):
        def terms():
            k = 1
            while True:
                yield 1 / k**2
                k += 1

        with pytest.raises(MaxTermsExceeded) as excinfo:
            sum_series(terms(), make_config["tiny"])
        assert excinfo.value.terms_used == 5
        assert excinfo.value.partial == pytest.approx(1 + 1 / 4 + 1 / 9 + 1 / 16 + 1 / 25)

    def test_overflow_is_divergence(self):
        def terms():
            k = 0
            while True:
                yield 1e300 * 10.0**k
                k += 1

        with pytest.raises(DivergentSeries):
            sum_series(terms())

    def test_finite_sum_mass(self):
        total = finite_sum([1, -1, 1, -1])
        assert total.value == 0
        assert total.mass == 4


class TestSeriesValue:
    def test_mass_covers_value(self):
        value = SeriesValue(value=-3, err_estimate=0.0, terms_used=1)
        assert value.mass == 3

    def test_arithmetic(self):
        a = SeriesValue(value=2, err_estimate=1e-15, terms_used=3)
        b = SeriesValue(value=4, err_estimate=2e-15, terms_used=5)
        assert (a + b).value == 6
        assert (a + b).err_estimate == pytest.approx(3e-15)
        assert (b - a).value == 2
        assert (a * b).value == 8
        assert (b / a).value == 2
        assert (1 - a).value == -1
        assert (-a).value == -2

    def test_divide_by_zero_value(self):
        with pytest.raises(PoleError):
            SeriesValue(value=1) / SeriesValue(value=0)

    def test_negative_error_rejected(self):
        with pytest.raises(ValidationError):
            SeriesValue(value=1, err_estimate=-1.0)


class TestResidual:
    def test_relative(self):
        r = Residual(1e-6, scale=1e4)
        assert float(r) == 1e-6
        assert r.relative == pytest.approx(1e-10)

    def test_scale_at_least_one(self):
        assert Residual(1e-12, scale=1e-3).relative == 1e-12

    def test_residual_scales_with_mass(self):
        left = finite_sum([1e6, -1e6, 1])
        r = residual(left, 1)
        assert r == 0
        assert r.scale == pytest.approx(2e6 + 1)

    def test_worst(self):
        small = Residual(1e-8, scale=1e6)
        large = Residual(1e-10)
        assert Residual.worst(small, large) is large


class TestPochhammer:
    @pytest.mark.parametrize("x, q, k", [(0.5, 0.5, 3), (-2, 0.3, 6), (0.9, 0.9, 10)])
    def test_finite_against_mpmath(self, x, q, k):
        expected = float(mpmath.qp(x, q, k))
        assert qpochhammer(x, q, k).real == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("x, q", [(0.3, 0.5), (-1.5, 0.7), (0.5, 0.9), (3.3, 0.2)])
    def test_infinite_against_mpmath(self, x, q):
        expected = float(mpmath.qp(x, q))
        product = qpochhammer_inf(x, q)
        assert product.real == pytest.approx(expected, rel=1e-12, abs=1e-15)
        assert abs(product.real - expected) <= product.err_estimate + 1e-15

    def test_zero_at_inverse_power(self):
        assert qpochhammer_inf(8, 0.5).value == 0
        assert qpochhammer(4, 0.5, 3) == 0

    def test_negative_length(self):
        with pytest.raises(DomainError):
            qpochhammer(0.5, 0.5, -1)

    def test_product_needs_too_many_factors(self, make_config):
        with pytest.raises(MaxTermsExceeded):
            qpochhammer_inf(0.5, 0.99, make_config["tiny"])

    def test_qbinomial_symmetry(self):
        assert qbinomial_coeff(7, 3, 0.4) == pytest.approx(qbinomial_coeff(7, 4, 0.4))
        assert qbinomial_coeff(5, 0, 0.4) == 1

    def test_qbinomial_out_of_range(self):
        with pytest.raises(DomainError):
            qbinomial_coeff(3, 4, 0.5)


class TestExponentials:
    def test_series_matches_product(self):
        series = e_q(0.5, 0.5, form="series")
        product = e_q(0.5, 0.5, form="product")
        assert series.value == pytest.approx(product.value, rel=1e-13)

    def test_reciprocal_pair(self):
        z = 0.3 + 0.4j
        assert (e_q(z, 0.6) * E_q(-z, 0.6)).value == pytest.approx(1, rel=1e-13)

    def test_big_e_series_matches_product(self):
        assert E_q(2.5, 0.5, form="series").value == pytest.approx(
            E_q(2.5, 0.5).value, rel=1e-13
        )

    def test_pole(self):
        with pytest.raises(PoleError):
            e_q(1, 0.5)

    def test_series_outside_disc(self):
        with pytest.raises(DivergentSeries):
            e_q(1.5, 0.5, form="series")

    def test_unknown_form(self):
        with pytest.raises(DomainError):
            e_q(0.5, 0.5, form="integral")


class TestIdentities:
    @pytest.mark.parametrize("a", [0.4, 1, -2, 1 + 1j])
    @pytest.mark.parametrize("x", [0, 0.5, -0.5, 0.3 + 0.4j])
    def test_qbinomial_theorem(self, a, x):
        assert qbinomial_theorem_residual(a, x, 0.5).relative <= 1e-12

    def test_qbinomial_theorem_outside_disc(self):
        with pytest.raises(DomainError):
            qbinomial_theorem_residual(0.5, 1.5, 0.5)

    @pytest.mark.parametrize("z", [0.5, -2, 1 + 1j, 2j])
    def test_finite_qbinomial(self, z):
        for k in range(12):
            assert qbinomial_finite_residual(z, k, 0.3).relative <= 1e-12

    @pytest.mark.parametrize("x", [0.5, -2, 2, 1 + 1j])
    def test_telescope(self, x):
        assert telescope_residual(x, 0.7).relative <= 1e-12

    def test_telescope_at_zero(self):
        with pytest.raises(DomainError):
            telescope_residual(0, 0.5)


class TestDifferenceOperators:
    def test_d_q_of_square(self):
        assert d_q(lambda t: t * t, 2.0, 0.5) == pytest.approx(2.0 * 1.5)

    def test_d_q_inv_of_square(self):
        assert d_q_inv(lambda t: t * t, 2.0, 0.5) == pytest.approx(2.0 * 3.0)

    def test_d_q_accepts_series_values(self):
        result = d_q(lambda t: SeriesValue(value=t), 3.0, 0.5)
        assert result == pytest.approx(1.0)

    def test_undefined_at_zero(self):
        with pytest.raises(DomainError):
            d_q(math.exp, 0, 0.5)

    @pytest.mark.parametrize("x, steps", [(0.5, 0), (1, 0), (2, 1), (8, 3), (9, 4), (-3 + 0j, 2)])
    def test_reduction_steps(self, x, steps):
        assert reduction_steps(x, 0.5) == steps
