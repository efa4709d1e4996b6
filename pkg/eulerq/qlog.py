r"""
Euler's q-logarithm.

.. math::

    S_q(x) = -\sum_{k \geq 1} \frac{q^k}{1 - q^k} (x;q)_k

:math:`S_q` is entire, vanishes at 1 and takes the value n at
:math:`q^{-n}`, so :math:`-\log q\, S_q(x)` interpolates :math:`\log x`.
"""

from __future__ import annotations

import logging
import math
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from eulerq.errors import DivergentSeries, DomainError, MaxTermsExceeded
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
    d_q,
    finite_sum,
    qpochhammer_inf,
    reduction_steps,
    residual,
    sum_series,
)
from eulerq.qhyper import phi_value
from eulerq.qzeta import QZeta

logger = logging.getLogger(__name__)

KERNEL_FORMS = ("series", "alternate", "phi21", "phi11")
PROBE_LIMIT = 20


def _snap(factor: complex) -> complex:
    return 0j if abs(factor) < ZERO_TOL else factor


def within_series_disc(x: Number) -> bool:
    r"""
    Tell whether the defining series can be summed without cancellation.

    Every factor of :math:`(x;q)_k` has modulus at most 1 when
    :math:`|1 - x| \leq 1`, and at most 2 when :math:`|x| \leq 1`.
    """
    return abs(x) <= 1 or abs(1 - x) <= 1


class GKernel(BaseModel):
    r"""
    The kernel :math:`G_q(x, t) = \sum_k t^k (x;q)_k` at one point.

    :param t:
        must satisfy ``|t| < 1``
    """

    model_config = ConfigDict(frozen=True)

    q: QParam
    x: complex
    t: complex

    @model_validator(mode="before")
    def base_from_float(cls, values: Any) -> Any:
        return coerce_base(values)

    @model_validator(mode="after")
    def t_inside_unit_disc(self) -> GKernel:
        if abs(self.t) >= 1:
            raise ValueError(f"The kernel needs |t| < 1, not |t|={abs(self.t)}.")
        return self


def g_kernel(
    kernel: GKernel, cfg: Optional[EvalConfig] = None, form: str = "series"
) -> SeriesValue:
    r"""
    Evaluate :math:`G_q(x, t)`.

    :param form:
        ``"series"`` for the defining sum; ``"alternate"`` for
        :math:`\sum_j (-xt)^j q^{j(j-1)/2}/(t;q)_{j+1}`; ``"phi21"`` and
        ``"phi11"`` for the two basic hypergeometric forms
    """
    cfg = cfg or DEFAULT_CONFIG
    q, x, t = kernel.q.q, kernel.x, kernel.t
    if form not in KERNEL_FORMS:
        raise DomainError(f"form must be one of {KERNEL_FORMS}, not {form!r}.")
    if form == "phi21":
        return phi_value([x, q], [0], q, t, cfg)
    if form == "phi11":
        return phi_value([q], [q * t], q, x * t, cfg) / (1 - t)
    if form == "alternate":

        def alternate_terms():
            term = 1 / (1 - t)
            j = 0
            while True:
                yield term
                j += 1
                term *= -x * t * q ** (j - 1) / (1 - t * q**j)

        return sum_series(alternate_terms(), cfg, ratio_cap=q, label="alternate kernel series")

    def terms():
        term = 1 + 0j
        k = 0
        while True:
            yield term
            term *= t * _snap(1 - x * q**k)
            k += 1

    return sum_series(terms(), cfg, ratio_cap=max(abs(t), q), label="kernel series")


class GrowthBounds(BaseModel):
    """Bounds for the maximum modulus of S_q on a disc of radius r."""

    model_config = ConfigDict(frozen=True)

    r: float
    lower: float
    intermediate: float
    m_r: float
    upper: float

    def holds(self, rel_tol: float = 1e-12) -> bool:
        """Check lower <= intermediate <= M(r) <= upper, allowing rounding."""
        chain = [self.lower, self.intermediate, self.m_r, self.upper]
        return all(
            left <= right + rel_tol * max(abs(left), abs(right), 1.0)
            for left, right in zip(chain, chain[1:])
        )


class SqFunction(BaseModel):
    r"""
    Euler's q-logarithm :math:`S_q` for one base.

    >>> S = SqFunction(q=0.5)
    >>> S.s_q(8).real
    3.0
    >>> S.s_q(1).real
    0.0

    :param q:
        the base, strictly between 0 and 1

    :param cfg:
        truncation settings shared by every evaluation
    """

    model_config = ConfigDict(frozen=True)

    q: QParam
    cfg: EvalConfig = DEFAULT_CONFIG

    @model_validator(mode="before")
    def base_from_float(cls, values: Any) -> Any:
        return coerce_base(values)

    @property
    def zeta(self) -> QZeta:
        return QZeta(q=self.q, cfg=self.cfg)

    def _defining_series(self, x: Number) -> SeriesValue:
        q = self.q.q

        def terms():
            pochhammer = 1 + 0j
            k = 1
            while True:
                qk = q**k
                pochhammer *= _snap(1 - x * q ** (k - 1))
                yield -qk / (1 - qk) * pochhammer
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="q-logarithm series")

    def s_q(self, x: Number, form: str = "auto") -> SeriesValue:
        r"""
        Evaluate :math:`S_q(x)`.

        Inside :math:`|x| \leq 1` or :math:`|1 - x| \leq 1` this sums the
        defining series. Elsewhere it applies the q-difference equation m
        times, with m the least integer such that :math:`|q^m x| \leq 1`:

        .. math::

            S_q(x) = S_q(q^m x) + \sum_{i=1}^m \left(1 - (q^i x;q)_\infty\right)

        The reduction keeps the relative error near machine precision, but
        its absolute error grows with the products :math:`(q^i x;q)_\infty`.
        For q near 1 and :math:`|x|` near 3 it is about a hundred times that
        of :meth:`s_q_taylor`; the rounding of every step is counted in
        ``err_estimate``, so the two can be compared.

        :param form:
            ``"series"`` forces the defining series everywhere
        """
        if form not in ("auto", "series"):
            raise DomainError(f"form must be 'auto' or 'series', not {form!r}.")
        if form == "series" or within_series_disc(x):
            return self._defining_series(x)
        q = self.q.q
        m = reduction_steps(x, q)
        logger.debug("reducing S_q(%s) by %d steps of the q-difference equation", x, m)
        product = qpochhammer_inf(x * q**m, q, self.cfg)
        products = [product]
        for i in range(m - 1, 0, -1):
            product = product * SeriesValue.exact(_snap(1 - x * q**i))
            products.append(product)
        corrections = finite_sum(1 - p for p in products)
        return self._defining_series(x * q**m) + corrections

    def taylor_coefficient(self, j: int) -> float:
        r"""
        Get the coefficient of :math:`x^j` in the Taylor series of :math:`S_q`.

        The constant term is :math:`-\zeta_q(1)`; for j >= 1 the coefficient
        is :math:`-q^{j(j+1)/2}(-1)^j/((1-q^j)(q;q)_j)`.
        """
        if j < 0:
            raise DomainError(f"Taylor coefficients need j >= 0, not {j}.")
        q = self.q.q
        if j == 0:
            return -self.zeta.zeta_q(1).real
        weight = 1.0
        for i in range(1, j + 1):
            weight *= q**i / (1 - q**i)
        return -((-1) ** j) * weight / (1 - q**j)

    def s_q_taylor(self, x: Number) -> SeriesValue:
        """Evaluate S_q from its Taylor series around 0."""
        q = self.q.q

        def terms():
            power = 1 + 0j
            j = 1
            while True:
                qj = q**j
                power *= -x * q ** (j - 1) / (1 - qj)
                yield -qj / (1 - qj) * power
                j += 1

        constant = -self.zeta.zeta_q(1)
        return constant + sum_series(terms(), self.cfg, ratio_cap=q, label="q-logarithm Taylor series")

    def s_q_phi_taylor(self, x: Number) -> SeriesValue:
        r"""
        Evaluate S_q as a sum of two basic hypergeometric series.

        .. math::

            S_q(x) = -\frac{q}{1-q}\, {}_2\phi_1(q, q; q^2; q, q)
                     + \frac{qx}{(1-q)^2}\, {}_2\phi_2(q, q; q^2, q^2; q, q^2 x)
        """
        q = self.q.q
        first = phi_value([q, q], [q * q], q, q, self.cfg) * (-q / (1 - q))
        second = phi_value([q, q], [q * q, q * q], q, q * q * x, self.cfg) * (
            q * x / (1 - q) ** 2
        )
        return first + second

    def s_q_phi32(self, x: Number) -> SeriesValue:
        r"""Evaluate :math:`-q(1-x)/(1-q)\, {}_3\phi_2(q, q, qx; q^2, 0; q, q)`."""
        q = self.q.q
        series = phi_value([q, q, q * x], [q * q, 0], q, q, self.cfg)
        return series * (-q * (1 - x) / (1 - q))

    def s_q_onemxk(self, x: Number) -> SeriesValue:
        r"""
        Evaluate S_q from its expansion in powers :math:`1 - x^k`.

        .. math::

            S_q(x) = -\sum_k \frac{q^{k(k+1)/2} (-1)^{k-1} (1 - x^k)}{(1-q^k)(q;q)_k}
        """
        q = self.q.q

        def terms():
            weight = 1.0
            power = 1 + 0j
            k = 1
            while True:
                qk = q**k
                weight *= qk / (1 - qk)
                power *= x
                yield (-1) ** k * weight * (1 - power) / (1 - qk)
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="(1-x^k) expansion")

    def s_q_derivative_at_1(self) -> SeriesValue:
        r"""
        Evaluate :math:`dS_q/dx` at x = 1.

        .. math::

            S_q'(1) = \sum_k \frac{k\, q^{k(k+1)/2} (-1)^{k-1}}{(1-q^k)(q;q)_k}
        """
        q = self.q.q

        def terms():
            weight = 1.0
            k = 1
            while True:
                qk = q**k
                weight *= qk / (1 - qk)
                yield (-1) ** (k - 1) * k * weight / (1 - qk)
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="derivative of S_q at 1")

    def g_kernel(self, x: Number, t: Number, form: str = "series") -> SeriesValue:
        """Evaluate the kernel G_q(x, t) for this base."""
        if abs(t) >= 1:
            raise DivergentSeries(f"The kernel G_q(x, t) needs |t| < 1, not |t|={abs(t)}.")
        return g_kernel(GKernel(q=self.q, x=x, t=t), self.cfg, form=form)

    def s_q_via_qintegral(self, x: Number) -> SeriesValue:
        r"""
        Evaluate S_q through its q-integral representation.

        .. math::

            S_q(x) = -\frac{q(1-x)}{1-q} \int_0^1 G_q(qx, qt)\, d_qt
        """
        q = self.q.q
        prefactor = -q * (1 - x) / (1 - q)
        if prefactor == 0:
            return SeriesValue(value=0j, terms_used=0)
        integral = QIntegral(
            base=self.q,
            upper_limit=1,
            integrand=lambda t: g_kernel(GKernel(q=self.q, x=q * x, t=q * t), self.cfg),
        )
        return integral.evaluate(self.cfg) * prefactor

    def qrecur_residual(self, x: Number) -> Residual:
        r"""Check :math:`S_q(x/q) - S_q(x) = 1 - (x;q)_\infty`."""
        q = self.q.q
        difference = self.s_q(x / q) - self.s_q(x)
        return residual(difference, 1 - qpochhammer_inf(x, q, self.cfg))

    def second_order_residual(self, x: Number) -> Residual:
        r"""
        Check the second order q-difference equation.

        .. math::

            (1-qx) S_q(q^2x) - (2-qx) S_q(qx) + S_q(x) = qx
        """
        q = self.q.q
        left = (
            self.s_q(q * q * x) * (1 - q * x)
            - self.s_q(q * x) * (2 - q * x)
            + self.s_q(x)
        )
        return residual(left, q * x)

    def s_q_at_qn(self, n: int) -> SeriesValue:
        r"""
        Evaluate :math:`S_q(q^n) = -n + (q;q)_\infty \sum_{k<n} 1/(q;q)_k`.
        """
        if n < 0:
            raise DomainError(f"s_q_at_qn needs n >= 0, not {n}.")
        q = self.q.q
        reciprocals = []
        pochhammer = 1.0
        for k in range(n):
            reciprocals.append(1 / pochhammer)
            pochhammer *= 1 - q ** (k + 1)
        return qpochhammer_inf(q, q, self.cfg) * finite_sum(reciprocals) - n

    def euler_recursion(self, n: int) -> List[float]:
        r"""
        Generate :math:`y_k = S_q(q^k)` for k up to n by Euler's recursion.

        Starts from :math:`y_0 = 0` and :math:`y_1 = -1 + (q;q)_\infty`, then

        .. math::

            y_k = \frac{(2 - q^{k-1}) y_{k-1} - y_{k-2} + q^{k-1}}{1 - q^{k-1}}
        """
        if n < 0:
            raise DomainError(f"euler_recursion needs n >= 0, not {n}.")
        q = self.q.q
        values = [0.0, -1 + qpochhammer_inf(q, q, self.cfg).real]
        for k in range(2, n + 1):
            qk = q ** (k - 1)
            t, u = values[-1], values[-2]
            values.append(((2 - qk) * t - u + qk) / (1 - qk))
        return values[: n + 1]

    def euler_sequence_residual(self, n: int) -> Residual:
        r"""
        Check :math:`y_n (1-q^{n-1}) - (2-q^{n-1}) y_{n-1} + y_{n-2} = q^{n-1}`
        with :math:`y_k` from the closed form at :math:`q^k`.
        """
        if n < 2:
            raise DomainError(f"The sequence relation needs n >= 2, not {n}.")
        q = self.q.q
        qn = q ** (n - 1)
        left = (
            self.s_q_at_qn(n) * (1 - qn)
            - self.s_q_at_qn(n - 1) * (2 - qn)
            + self.s_q_at_qn(n - 2)
        )
        return residual(left, qn)

    def qdiff_residual(self, x: Number) -> Residual:
        r"""Check :math:`D_q((1-q) S_q)(x) = (1 - (qx;q)_\infty)/x`."""
        q = self.q.q
        derivative = d_q(lambda t: self.s_q(t).value * (1 - q), x, q)
        expected = (1 - qpochhammer_inf(q * x, q, self.cfg)) / x
        return residual(SeriesValue.exact(derivative, terms_used=2), expected)

    def _finite_first_sum(self, x: Number, n: int) -> SeriesValue:
        q = self.q.q
        terms = []
        pochhammer = 1 + 0j
        for k in range(1, n + 1):
            qk = q**k
            pochhammer *= _snap(1 - x * q ** (k - 1))
            terms.append(pochhammer * qk / (1 - qk))
        return finite_sum(terms)

    def _alternating_with_power(self, scale: float) -> SeriesValue:
        q = self.q.q

        def terms():
            weight = 1.0
            k = 1
            while True:
                qk = q**k
                weight *= qk / (1 - qk)
                yield (-1) ** (k - 1) * weight * scale**k / (1 - qk)
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="alternating summation series")

    def summation_residuals(self, n: int) -> Tuple[Residual, Residual]:
        r"""
        Check the summation formulas that follow from :math:`S_q(q^{-n}) = n`
        and from the closed form of :math:`S_q(q^n)`.

        :returns:
            the worst residual of each family: first the pair
            :math:`\sum_{k \leq n} (q^{-n};q)_k q^k/(1-q^k) = -n` and
            :math:`\sum_k q^{k(k+1)/2}(-1)^{k-1}q^{-nk}/((1-q^k)(q;q)_k) = n + \zeta_q(1)`,
            then the two formulas at :math:`q^n`
        """
        if n < 0:
            raise DomainError(f"Summation formulas need n >= 0, not {n}.")
        q = self.q.q
        zeta1 = self.zeta.zeta_q(1)
        telescoped = finite_sum(
            qpochhammer_inf(q ** (k + 1), q, self.cfg) for k in range(n)
        )

        first = Residual.worst(
            residual(self._finite_first_sum(q**-n, n), -n),
            residual(self._alternating_with_power(q**-n), zeta1 + n),
        )

        def shifted_terms():
            pochhammer = 1 + 0j
            k = 1
            while True:
                qk = q**k
                pochhammer *= 1 - q ** (n + k - 1)
                yield pochhammer * qk / (1 - qk)
                k += 1

        shifted = sum_series(shifted_terms(), self.cfg, ratio_cap=q, label="summation series at q^n")
        second = Residual.worst(
            residual(shifted, n - telescoped),
            residual(self._alternating_with_power(q**n), zeta1 - n + telescoped),
        )
        return first, second

    def growth_bounds(self, r: float) -> GrowthBounds:
        r"""
        Evaluate M(r) and its bounds.

        .. math::

            (-rq;q)_\infty - (q;q)_\infty
            \leq (q;q)_\infty \sum_k \frac{q^k (-r;q)_k}{(q;q)_k}
            \leq M(r) = \sum_k \frac{q^k}{1-q^k}(-r;q)_k
            \leq (-r;q)_\infty\, \zeta_q(1)
        """
        if not r > 0:
            raise DomainError(f"Growth bounds need r > 0, not {r}.")
        q = self.q.q
        qq_inf = qpochhammer_inf(q, q, self.cfg).real

        def m_terms():
            pochhammer = 1.0
            k = 1
            while True:
                qk = q**k
                pochhammer *= 1 + r * q ** (k - 1)
                yield qk / (1 - qk) * pochhammer
                k += 1

        def binomial_terms():
            ratio = 1.0
            k = 1
            while True:
                qk = q**k
                ratio *= (1 + r * q ** (k - 1)) / (1 - qk)
                yield qk * ratio
                k += 1

        m_r = sum_series(m_terms(), self.cfg, ratio_cap=q, label="M(r) series").real
        intermediate = qq_inf * sum_series(
            binomial_terms(), self.cfg, ratio_cap=q, label="lower bound series"
        ).real
        return GrowthBounds(
            r=r,
            lower=qpochhammer_inf(-r * q, q, self.cfg).real - qq_inf,
            intermediate=intermediate,
            m_r=m_r,
            upper=qpochhammer_inf(-r, q, self.cfg).real * self.zeta.zeta_q(1).real,
        )

    def growth_bound_check(self, r: float) -> bool:
        """Check that M(r) lies between its lower and upper bounds."""
        return self.growth_bounds(r).holds()

    def qlog_limit_probe(self, x: float, m: int) -> List[float]:
        r"""
        Measure how far :math:`(1-q)S_q(x)` is from :math:`\log x` as q rises to 1.

        Evaluates at :math:`q_i = 1 - 2^{-i}` for i from 1 to m, which
        needs about :math:`2^i` terms each; i beyond 20 raises
        :class:`~eulerq.errors.MaxTermsExceeded`. The base of this
        object is not used.
        """
        return qlog_limit_probe(x, m, self.cfg)


def probe_config(cfg: EvalConfig, q: float) -> EvalConfig:
    """Widen the term cap enough for a series with term ratio q."""
    needed = math.ceil(2 * math.log(1 / cfg.eps) / (1 - q)) + cfg.min_terms
    return cfg.widened(needed)


def probe_bases(m: int) -> List[float]:
    """Get the bases 1 - 2^-i for i from 1 to m."""
    if m < 1:
        raise DomainError(f"A limit probe needs m >= 1, not {m}.")
    if m > PROBE_LIMIT:
        raise MaxTermsExceeded(
            f"Limit probes stop at q = 1 - 2^-{PROBE_LIMIT}; m={m} is too large."
        )
    return [1 - 2.0**-i for i in range(1, m + 1)]


def qlog_limit_probe(x: float, m: int, cfg: Optional[EvalConfig] = None) -> List[float]:
    """
    Get the errors of :math:`(1-q_i)S_{q_i}(x)` against :math:`\\log x`.

    >>> qlog_limit_probe(1, 3)
    [0.0, 0.0, 0.0]
    """
    cfg = cfg or DEFAULT_CONFIG
    if not x > 0:
        raise DomainError(f"The logarithm limit needs x > 0, not {x}.")
    errors = []
    for q in probe_bases(m):
        S = SqFunction(q=q, cfg=probe_config(cfg, q))
        errors.append(abs((1 - q) * S.s_q(x).value - math.log(x)))
    return errors
