r"""
The two-variable Lambert-type generalization of the q-logarithm.

.. math::

    F_q(x, t) = -\sum_{k \geq 1} (x;q)_k \frac{t^k}{1 - t^k}

At ``t = q`` this is :math:`S_q(x)`.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Any, List, Tuple

from pydantic import BaseModel, ConfigDict, model_validator
from sympy import divisors

from eulerq.errors import DivergentSeries, DomainError, ZeroDenominator
from eulerq.jackson import QIntegral
from eulerq.qcore import (
    DEFAULT_CONFIG,
    ZERO_TOL,
    EvalConfig,
    Number,
    QParam,
    Residual,
    SeriesValue,
    coerce_base,
    qpochhammer,
    qpochhammer_inf,
    residual,
    sum_series,
)
from eulerq.qhyper import phi_value, qgauss_residual
from eulerq.qlog import GKernel, SqFunction, g_kernel

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def _divisors_of(l: int) -> Tuple[int, ...]:
    return tuple(int(d) for d in divisors(l))


def _check_t(t: Number) -> None:
    if abs(t) >= 1:
        raise DivergentSeries(f"F_q(x, t) needs |t| < 1, not |t|={abs(t)}.")


class FqFunction(BaseModel):
    r"""
    The function :math:`F_q(x, t)` for one base q.

    >>> F = FqFunction(q=0.5)
    >>> F.f_q(1, 0.3).value
    0j

    :param q:
        the base of the Pochhammer symbols, strictly between 0 and 1

    :param cfg:
        truncation settings
    """

    model_config = ConfigDict(frozen=True)

    q: QParam
    cfg: EvalConfig = DEFAULT_CONFIG

    @model_validator(mode="before")
    def base_from_float(cls, values: Any) -> Any:
        return coerce_base(values)

    def f_q(self, x: Number, t: Number) -> SeriesValue:
        """Sum the defining Lambert series."""
        _check_t(t)
        q = self.q.q

        def terms():
            pochhammer = 1 + 0j
            power = 1 + 0j
            k = 1
            while True:
                factor = 1 - x * q ** (k - 1)
                pochhammer *= 0j if abs(factor) < ZERO_TOL else factor
                power *= t
                yield -pochhammer * power / (1 - power)
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=max(abs(t), q), label="F_q series")

    def divisor_coefficient(self, x: Number, l: int) -> complex:
        r"""
        Get the coefficient :math:`\sum_{d \mid l} (x;q)_d` of :math:`-t^l`.

        >>> FqFunction(q=0.5).divisor_coefficient(0, 6)
        (4+0j)
        """
        if l < 1:
            raise DomainError(f"Divisor coefficients need l >= 1, not {l}.")
        return sum((qpochhammer(x, self.q, d) for d in _divisors_of(l)), 0j)

    def f_q_divisor_expansion(self, x: Number, t: Number) -> SeriesValue:
        r"""Sum :math:`-\sum_l t^l \sum_{d \mid l} (x;q)_d`."""
        _check_t(t)
        q = self.q.q
        pochhammers: List[complex] = [1 + 0j]

        def terms():
            power = 1 + 0j
            l = 1
            while True:
                factor = 1 - x * q ** (l - 1)
                pochhammers.append(pochhammers[-1] * (0j if abs(factor) < ZERO_TOL else factor))
                power *= t
                yield -power * sum(pochhammers[d] for d in _divisors_of(l))
                l += 1

        return sum_series(
            terms(), self.cfg, ratio_cap=max(abs(t), 0.5), label="divisor expansion of F_q"
        )

    def x_expansion_inner(self, l: int, t: Number) -> SeriesValue:
        r"""
        Get the inner sum :math:`\sum_n t^{nl}/(t^n;q)_{l+1}` of the expansion in x.

        For l = 0 this is the Lambert series :math:`\sum_n t^n/(1 - t^n)`.
        """
        if l < 0:
            raise DomainError(f"The expansion in x needs l >= 0, not {l}.")
        _check_t(t)
        q = self.q.q

        def terms():
            n = 1
            while True:
                tn = t**n
                if l == 0:
                    yield tn / (1 - tn)
                else:
                    denominator = qpochhammer(tn, q, l + 1)
                    if abs(denominator) < ZERO_TOL:
                        raise ZeroDenominator(f"(t^{n};q)_{l + 1} vanishes at t={t}.")
                    yield tn**l / denominator
                n += 1

        cap = max(abs(t) ** max(l, 1), 0.5 * abs(t))
        return sum_series(terms(), self.cfg, ratio_cap=cap, label=f"inner sum {l} of F_q")

    def f_q_x_expansion(self, x: Number, t: Number) -> SeriesValue:
        r"""
        Sum the expansion of :math:`F_q` in powers of x.

        .. math::

            F_q(x, t) = -\sum_{l \geq 0} (-x)^l q^{l(l-1)/2}
                        \sum_{n \geq 1} \frac{t^{nl}}{(t^n;q)_{l+1}}
        """
        _check_t(t)
        q = self.q.q

        def terms():
            weight = 1 + 0j
            l = 0
            while True:
                yield -weight * self.x_expansion_inner(l, t)
                weight *= -x * q**l
                l += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="expansion of F_q in x")

    def f_q_via_qintegral(self, x: Number, p: float) -> SeriesValue:
        r"""
        Evaluate :math:`F_q(x, p)` as a Jackson integral with base p.

        .. math::

            F_q(x, p) = -\frac{p(1-x)}{1-p} \int_0^1 G_q(qx, pt)\, d_pt
        """
        base = QParam(q=p)
        q = self.q.q
        prefactor = -p * (1 - x) / (1 - p)
        if prefactor == 0:
            return SeriesValue(value=0j, terms_used=0)
        integral = QIntegral(
            base=base,
            upper_limit=1,
            integrand=lambda t: g_kernel(GKernel(q=self.q, x=q * x, t=p * t), self.cfg),
        )
        return integral.evaluate(self.cfg) * prefactor

    def gauss_parameters(self, l: int) -> Tuple[float, float, float]:
        r"""
        Get the q-Gauss parameters :math:`(q, q, q^{l+2})`, whose argument
        :math:`c/(ab)` is :math:`q^l`.
        """
        if l < 1:
            raise DomainError(f"The q-Gauss specialization needs l >= 1, not {l}.")
        q = self.q.q
        return q, q, q ** (l + 2)

    def gauss_specialization_residual(self, l: int) -> Tuple[Residual, Residual]:
        r"""
        Check the q-Gauss sum at :math:`(q, q, q^{l+2})` and the sum it implies.

        :returns:
            the residual of the q-Gauss sum, then the residual of
            :math:`\sum_{n \geq 1} (q;q)_{n-1} q^{nl}/(q^{l+1};q)_n = q^l/(1-q^l)`
        """
        a, b, c = self.gauss_parameters(l)
        q = self.q.q
        gauss = qgauss_residual(a, b, c, self.q, self.cfg)

        def terms():
            ratio = 1.0
            n = 1
            while True:
                ratio /= 1 - q ** (l + n)
                yield ratio * q ** (n * l)
                ratio *= 1 - q**n
                n += 1

        series = sum_series(terms(), self.cfg, ratio_cap=q**l, label="q-Gauss consequence")
        return gauss, residual(series, q**l / (1 - q**l))

    def quadratic_transform_values(self, j: int) -> Tuple[SeriesValue, SeriesValue, SeriesValue]:
        r"""
        Evaluate the pieces of the quadratic transformation at :math:`t = q^2`.

        :returns:
            the direct sum, the :math:`{}_3\phi_2` form in base :math:`q^2`,
            and :math:`{}_2\phi_1(q^j, -q^j; -q^{j+1}; q, q^2)`
        """
        if j < 1:
            raise DomainError(f"The quadratic transformation needs j >= 1, not {j}.")
        q = self.q.q
        cfg = self.cfg

        def direct_terms():
            n = 1
            while True:
                numerator = qpochhammer_inf(q ** (2 * n + j + 1), q, cfg)
                yield numerator / qpochhammer_inf(q ** (2 * n), q, cfg) * q ** (2 * n * j)
                n += 1

        direct = sum_series(direct_terms(), cfg, ratio_cap=q ** (2 * j), label="quadratic sum")
        q2 = q * q
        cubic = phi_value([q2, q2, q**3], [q ** (j + 3), q ** (j + 4)], q2, q ** (2 * j), cfg)
        cubic = cubic * ((1 - q ** (2 * j)) / qpochhammer(q2, q, j + 1))
        quadratic = phi_value([q**j, -(q**j)], [-(q ** (j + 1))], q, q2, cfg)
        return direct, cubic, quadratic

    def quadratic_transform_residual(self, j: int) -> Tuple[Residual, Residual]:
        r"""
        Check the quadratic transformation of the sum at :math:`t = q^2`.

        :returns:
            the residual of the direct sum against
            :math:`q^{2j}/(1-q^{2j})` times the :math:`{}_2\phi_1`, then
            the residual of the :math:`{}_3\phi_2` form against the :math:`{}_2\phi_1`
        """
        direct, cubic, quadratic = self.quadratic_transform_values(j)
        q2j = self.q.q ** (2 * j)
        return (
            residual(direct, quadratic * (q2j / (1 - q2j))),
            residual(cubic, quadratic),
        )

    def fq_equals_sq_residual(self, x: Number) -> Residual:
        """Check that F_q(x, q) is S_q(x)."""
        return residual(self.f_q(x, self.q.q), SqFunction(q=self.q, cfg=self.cfg).s_q(x))

