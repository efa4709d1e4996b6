import cmath
import math

import pytest
from pydantic import ValidationError
from sympy import divisor_count

from eulerq.errors import DivergentSeries, DomainError
from eulerq.qcore import e_q
from eulerq.variants import (
    VariantParam,
    borwein_lnq,
    kirillov_li2,
    kirillov_logq,
    kirillov_logq_quotient,
    tsallis_lnq,
    zudilin_l,
)


class TestVariantParam:
    def test_regime_per_tag(self):
        assert VariantParam(q=0.5, domain_tag="kirillov").q == 0.5
        assert VariantParam(q=-3, domain_tag="borwein").q == -3

    @pytest.mark.parametrize(
        "q, tag", [(1, "tsallis"), (0.5, "borwein"), (1.5, "kirillov"), (0, "kirillov")]
    )
    def test_outside_regime(self, q, tag):
        with pytest.raises(ValidationError):
            VariantParam(q=q, domain_tag=tag)

    def test_unknown_tag(self):
        with pytest.raises(ValidationError):
            VariantParam(q=0.5, domain_tag="euler")

    def test_for_tag_raises_domain_error(self):
        with pytest.raises(DomainError):
            VariantParam.for_tag(1, "tsallis")


class TestTsallis:
    def test_natural_logarithm_at_zero_base(self):
        assert tsallis_lnq(3, 0) == pytest.approx(2.0)

    def test_near_one(self):
        assert tsallis_lnq(math.e, 0.999999) == pytest.approx(1.0, rel=1e-5)

    def test_negative_q(self):
        assert tsallis_lnq(4, -1) == pytest.approx(7.5)

    @pytest.mark.parametrize("x", [0, -2])
    def test_positive_x_only(self, x):
        with pytest.raises(DomainError):
            tsallis_lnq(x, 0.5)


class TestBorwein:
    def test_divisor_sum_at_minus_one(self):
        expected = -sum(int(divisor_count(n)) / 2**n for n in range(1, 80))
        assert borwein_lnq(-1, 2).value == pytest.approx(expected, rel=1e-13)

    def test_zero(self):
        assert borwein_lnq(0, 3).value == 0

    def test_negative_base(self):
        total = borwein_lnq(0.5, -2)
        expected = sum((-0.5) ** k / (1 - (-2) ** k) for k in range(1, 80))
        assert total.value == pytest.approx(expected, rel=1e-13)

    def test_outside_disc(self):
        with pytest.raises(DivergentSeries):
            borwein_lnq(2.5, 2)

    def test_base_regime(self):
        with pytest.raises(DomainError):
            borwein_lnq(0.1, 0.5)


class TestKirillov:
    @pytest.mark.parametrize("z", [0.3, -0.5, 0.2 + 0.3j])
    def test_logarithmic_derivative(self, z):
        assert kirillov_logq_quotient(z, 0.5).value == pytest.approx(
            kirillov_logq(z, 0.5).value, rel=1e-12
        )

    @pytest.mark.parametrize("q", [0.3, 0.4, 0.5, 0.9])
    @pytest.mark.parametrize("z", [0.3, -0.5, 0.7, -0.9])
    def test_dilogarithm_is_log_of_exponential(self, z, q):
        expected = math.log(e_q(z, q, form="product").real)
        assert kirillov_li2(z, q).value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    @pytest.mark.parametrize("z", [0.2 + 0.3j, -0.4 + 0.5j, 0.6j])
    def test_exponential_of_dilogarithm(self, z, q):
        expected = e_q(z, q, form="product").value
        assert cmath.exp(kirillov_li2(z, q).value) == pytest.approx(expected, rel=1e-12)

    def test_outside_disc(self):
        with pytest.raises(DivergentSeries):
            kirillov_logq(1, 0.5)

    def test_base_regime(self):
        with pytest.raises(DomainError):
            kirillov_li2(0.5, 2)


class TestZudilin:
    def test_first_order_at_one(self, make_zeta):
        assert zudilin_l(1, 0.5, 1).value == pytest.approx(
            make_zeta["half"].zeta_q(1).value, rel=1e-13
        )

    def test_second_order_at_one(self, make_zeta):
        assert zudilin_l(1, 0.3, 2).value == pytest.approx(
            make_zeta["third"].zeta_q(2).value, rel=1e-13
        )

    def test_order(self):
        with pytest.raises(DomainError):
            zudilin_l(1, 0.5, 3)

    def test_outside_disc(self):
        with pytest.raises(DivergentSeries):
            zudilin_l(2, 0.5, 1)
