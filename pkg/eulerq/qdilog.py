r"""
The q-dilogarithm and the classical dilogarithm it deforms.

.. math::

    \mathrm{Li}_2(x;q) = \sum_{k \geq 1} \frac{q^k}{(1 - q^k)^2} (x;q)_k

As q rises to 1, :math:`(1-q)^2 \mathrm{Li}_2(x;q)` tends to the classical
:math:`\mathrm{Li}_2(1 - x)` on the disc :math:`|1 - x| \leq 1`.
"""

from __future__ import annotations

import cmath
import logging
import math
from functools import lru_cache
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, model_validator
from sympy import bernoulli

from eulerq.errors import DomainError
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
    q_value,
    qpochhammer,
    reduction_steps,
    residual,
    sum_series,
)
from eulerq.qhyper import phi_value
from eulerq.qlog import SqFunction, probe_bases, probe_config, within_series_disc
from eulerq.qzeta import QZeta

logger = logging.getLogger(__name__)

ZETA2 = math.pi**2 / 6


@lru_cache(maxsize=None)
def _zeta_at_nonpositive(k: int) -> float:
    """Get the Riemann zeta value at 2 - k, for k >= 2."""
    if k == 2:
        return -0.5
    return -float(bernoulli(k - 1)) / (k - 1)


class ClassicalDilog(BaseModel):
    r"""
    The classical dilogarithm :math:`\mathrm{Li}_2(x) = \sum_n x^n/n^2` on :math:`|x| \leq 1`.

    >>> ClassicalDilog().classical_li2(1).real == ZETA2
    True
    """

    model_config = ConfigDict(frozen=True)

    cfg: EvalConfig = DEFAULT_CONFIG

    def classical_li2(self, x: Number) -> SeriesValue:
        r"""
        Evaluate the classical dilogarithm.

        Uses the power series for :math:`|x| \leq 1/2`. Closer to the unit
        circle it uses the expansion in :math:`w = \log x`,

        .. math::

            \mathrm{Li}_2(e^w) = \frac{\pi^2}{6} + w(1 - \log(-w))
                + \sum_{k \geq 2} \frac{\zeta(2-k)}{k!} w^k

        which converges for :math:`|w| < 2\pi`.
        """
        if abs(x) > 1:
            raise DomainError(f"The classical dilogarithm series needs |x| <= 1, not |x|={abs(x)}.")
        if x == 1:
            return SeriesValue.exact(ZETA2, terms_used=0)
        if abs(x) <= 0.5:

            def terms():
                power = 1 + 0j
                n = 1
                while True:
                    power *= x
                    yield power / (n * n)
                    n += 1

            return sum_series(terms(), self.cfg, ratio_cap=abs(x), label="dilogarithm series")

        w = cmath.log(x)
        if w == 0:
            return SeriesValue.exact(ZETA2, terms_used=0)

        def log_terms():
            power = w
            factorial = 1.0
            k = 2
            while True:
                power *= w
                factorial *= k
                yield _zeta_at_nonpositive(k) * power / factorial
                k += 1

        head = ZETA2 + w * (1 - cmath.log(-w))
        return head + sum_series(
            log_terms(), self.cfg, ratio_cap=abs(w) / (2 * math.pi), label="dilogarithm log-series"
        )


class QDilog(BaseModel):
    r"""
    The q-dilogarithm :math:`\mathrm{Li}_2(x;q)` for one base.

    >>> L = QDilog(q=0.5)
    >>> L.li2q(1).value
    0j

    :param q:
        the base, strictly between 0 and 1

    :param cfg:
        truncation settings
    """

    model_config = ConfigDict(frozen=True)

    q: QParam
    cfg: EvalConfig = DEFAULT_CONFIG

    @model_validator(mode="before")
    def base_from_float(cls, values: Any) -> Any:
        return coerce_base(values)

    @property
    def logarithm(self) -> SqFunction:
        return SqFunction(q=self.q, cfg=self.cfg)

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
                factor = 1 - x * q ** (k - 1)
                pochhammer *= 0j if abs(factor) < ZERO_TOL else factor
                yield qk / (1 - qk) ** 2 * pochhammer
                k += 1

        return sum_series(terms(), self.cfg, ratio_cap=q, label="q-dilogarithm series")

    def _node_term(self, y: Number) -> SeriesValue:
        r"""Get :math:`y S_q(y)/(1-y)`, with its limit :math:`-S_q'(1)` at y = 1."""
        if abs(1 - y) < ZERO_TOL:
            return -self.logarithm.s_q_derivative_at_1()
        return self.logarithm.s_q(y) * (y / (1 - y))

    def li2q(self, x: Number) -> SeriesValue:
        r"""
        Evaluate :math:`\mathrm{Li}_2(x;q)`.

        Outside :math:`|x| \leq 1` and :math:`|1 - x| \leq 1` this applies
        the q-difference relation m times,

        .. math::

            \mathrm{Li}_2(x;q) = \mathrm{Li}_2(q^m x;q)
                + \sum_{k<m} \frac{xq^k}{1 - xq^k} S_q(xq^k)
        """
        if within_series_disc(x):
            return self._defining_series(x)
        q = self.q.q
        m = reduction_steps(x, q)
        logger.debug("reducing Li2(%s;q) by %d steps of the q-difference relation", x, m)
        corrections = finite_sum(self._node_term(x * q**k) for k in range(m))
        return self._defining_series(x * q**m) + corrections

    def li2q_qdiff_residual(self, x: Number) -> Residual:
        r"""
        Check :math:`\mathrm{Li}_2(qx;q) - \mathrm{Li}_2(x;q) = -x S_q(x)/(1-x)`.

        At x = 1 the right side is replaced by its limit :math:`S_q'(1)`.
        """
        q = self.q.q
        difference = self.li2q(q * x) - self.li2q(x)
        if abs(1 - x) < ZERO_TOL:
            return residual(difference, self.logarithm.s_q_derivative_at_1())
        return residual(difference, -self._node_term(x))

    def derivative_form_residual(self, x: Number) -> Residual:
        r"""Check :math:`(1-q)(1-x)\, D_q \mathrm{Li}_2(x;q) = S_q(x)`."""
        q = self.q.q
        derivative = d_q(lambda t: self.li2q(t), x, q)
        left = SeriesValue.exact((1 - q) * (1 - x) * derivative, terms_used=2)
        return residual(left, self.logarithm.s_q(x))

    def li2q_via_qintegral(self, x: Number) -> SeriesValue:
        r"""
        Evaluate :math:`\zeta_q(2) + \frac{1}{1-q}\int_0^x \frac{S_q(t)}{1-t}\, d_qt`.

        When a node :math:`xq^k` equals 1 the integral is undefined and the
        defining series is used instead.
        """
        q = self.q.q
        if abs(x) >= 1:
            m = round(math.log(abs(x)) / math.log(1 / q))
            if abs(1 - x * q**m) < ZERO_TOL:
                logger.debug("q-integral node hits t=1 at x=%s; using the series", x)
                return self.li2q(x)
        integral = QIntegral(
            base=self.q,
            upper_limit=x,
            integrand=lambda t: self.logarithm.s_q(t) / (1 - t),
            singular_points=(1,),
        )
        return self.zeta.zeta_q(2) + integral.evaluate(self.cfg) / (1 - q)

    def _inner_phi(self, j: int) -> SeriesValue:
        q = self.q.q
        qj = q**j
        return phi_value([qj, qj], [qj * q], q, q, self.cfg)

    def taylor_coefficient(self, j: int) -> SeriesValue:
        r"""
        Get the coefficient :math:`a_j` of :math:`x^j` in the Taylor series.

        :math:`a_0 = \zeta_q(2)`, and for j >= 1

        .. math::

            a_j = \frac{(-1)^j q^{j(j+1)/2}}{(1-q^j)^2}\,
                  {}_2\phi_1(q^j, q^j; q^{j+1}; q, q)
        """
        if j < 0:
            raise DomainError(f"Taylor coefficients need j >= 0, not {j}.")
        if j == 0:
            return self.zeta.zeta_q(2)
        q = self.q.q
        weight = (-1) ** j * q ** (j * (j + 1) / 2) / (1 - q**j) ** 2
        return self._inner_phi(j) * weight

    def li2q_taylor(self, x: Number) -> SeriesValue:
        """Evaluate the q-dilogarithm from its Taylor series around 0."""

        def terms():
            power = 1 + 0j
            j = 1
            while True:
                power *= x
                yield self.taylor_coefficient(j) * power
                j += 1

        return self.zeta.zeta_q(2) + sum_series(
            terms(), self.cfg, ratio_cap=self.q.q, label="q-dilogarithm Taylor series"
        )

    def special_value(self, n: int) -> float:
        r"""Get :math:`\mathrm{Li}_2(q^{-n};q) = -\sum_{k=1}^n k/(1-q^k)`."""
        if n < 0:
            raise DomainError(f"Special values need n >= 0, not {n}.")
        q = self.q.q
        return -sum(k / (1 - q**k) for k in range(1, n + 1))

    def sumform_li_residual(self, n: int) -> Residual:
        r"""
        Check the chain of equalities at :math:`x = q^{-n}`.

        .. math::

            \sum_{k=1}^n \frac{(q^{-n};q)_k q^k}{(1-q^k)^2}
            = -\sum_{k=1}^n \frac{k}{1-q^k}
            = \zeta_q(2) + \sum_{j \geq 1} a_j q^{-nj}

        :returns:
            the worst residual of the two links
        """
        if n < 0:
            raise DomainError(f"The summation formula needs n >= 0, not {n}.")
        q = self.q.q
        x = q**-n
        finite = finite_sum(
            qpochhammer(x, q, k) * q**k / (1 - q**k) ** 2 for k in range(1, n + 1)
        )
        closed = self.special_value(n)
        return Residual.worst(residual(finite, closed), residual(self.li2q_taylor(x), closed))

    def remainder_relation_residual(self, n: int) -> Residual:
        r"""
        Check the closed form of the remainder of the alternating series for :math:`\zeta_q(1)`.

        .. math::

            \frac{(-1)^{n-1} q^{n(n+1)/2}}{1-q^n}\, {}_2\phi_1(q^n, q^n; q^{n+1}; q, q)
            = \zeta_q(1) + \sum_{j=1}^{n-1} \frac{(-1)^j q^{j(j+1)/2}}{(1-q^j)(q;q)_j}
        """
        if n < 1:
            raise DomainError(f"The remainder relation needs n >= 1, not {n}.")
        q = self.q.q
        left = self._inner_phi(n) * ((-1) ** (n - 1) * q ** (n * (n + 1) / 2) / (1 - q**n))
        right = self.zeta.zeta_q(1) - self.zeta.zeta1_alternating_partial(n - 1)
        return residual(left, right)

    def coefficient_relation_residual(self, n: int) -> Residual:
        r"""
        Check :math:`(q^n - 1) a_n = -\sum_{p<n} b_p`, with :math:`b_p` the
        Taylor coefficients of :math:`S_q`.
        """
        if n < 1:
            raise DomainError(f"The coefficient relation needs n >= 1, not {n}.")
        q = self.q.q
        left = self.taylor_coefficient(n) * (q**n - 1)
        b = [self.logarithm.taylor_coefficient(p) for p in range(n)]
        return residual(left, -finite_sum(b))

    def dilog_limit_probe(self, x: float, m: int) -> ProbeErrors:
        """Measure how far (1-q)^2 Li2(x;q) is from the classical Li2(1-x) as q rises to 1."""
        return dilog_limit_probe(x, m, self.cfg)


def dominated_bound_check(q: float, k_max: int = 200, x: Number = 0) -> bool:
    r"""
    Check the termwise bound :math:`|q^k (x;q)_k| (1-q)^2/(1-q^k)^2 \leq 1/k^2`.

    >>> dominated_bound_check(0.9)
    True

    :param x:
        a point with :math:`|1 - x| \leq 1`
    """
    base = q_value(q)
    if abs(1 - x) > 1:
        raise DomainError(f"The termwise bound needs |1 - x| <= 1, not {abs(1 - x)}.")
    pochhammer = 1 + 0j
    for k in range(1, k_max + 1):
        pochhammer *= 1 - x * base ** (k - 1)
        qk = base**k
        bound = abs(qk * pochhammer) * (1 - base) ** 2 / (1 - qk) ** 2
        if bound > (1 + 1e-12) / k**2:
            logger.debug("termwise bound fails at q=%s, k=%d", base, k)
            return False
    return True


class ProbeErrors(list):
    """
    The errors of a limit probe, one per base.

    Behaves as the list of errors and also records the bases and whether
    the termwise bound held at each of them.

    >>> errors = ProbeErrors([0.3, 0.1], bases=[0.5, 0.75], bound_holds=[True, False])
    >>> errors.failed_bases
    [0.75]
    """

    def __init__(
        self, errors: List[float], bases: List[float], bound_holds: List[bool]
    ) -> None:
        if not len(errors) == len(bases) == len(bound_holds):
            raise ValueError(
                f"A probe needs one base and one bound check per error, not "
                f"{len(bases)} bases and {len(bound_holds)} checks for {len(errors)} errors."
            )
        super().__init__(errors)
        self.bases = list(bases)
        self.bound_holds = list(bound_holds)

    @property
    def bound_held(self) -> bool:
        return all(self.bound_holds)

    @property
    def failed_bases(self) -> List[float]:
        return [q for q, held in zip(self.bases, self.bound_holds) if not held]

    def __repr__(self) -> str:
        return f"ProbeErrors({list(self)!r}, failed_bases={self.failed_bases!r})"


def dilog_limit_probe(x: float, m: int, cfg: Optional[EvalConfig] = None) -> ProbeErrors:
    r"""
    Get the errors of :math:`(1-q_i)^2 \mathrm{Li}_2(x;q_i)` against :math:`\mathrm{Li}_2(1-x)`.

    The bases are :math:`q_i = 1 - 2^{-i}` for i from 1 to m. The termwise
    bound is checked at each base; the result carries those checks in
    :attr:`ProbeErrors.bound_holds` and a failure is also logged.
    """
    cfg = cfg or DEFAULT_CONFIG
    if abs(1 - x) > 1:
        raise DomainError(f"The dilogarithm limit needs |1 - x| <= 1, not {abs(1 - x)}.")
    target = ClassicalDilog(cfg=cfg).classical_li2(1 - x).value
    bases = probe_bases(m)
    errors = []
    holds = []
    for q in bases:
        held = dominated_bound_check(q, x=x)
        if not held:
            logger.warning("termwise bound fails at q=%s, x=%s", q, x)
        holds.append(held)
        L = QDilog(q=q, cfg=probe_config(cfg, q))
        errors.append(abs((1 - q) ** 2 * L.li2q(x).value - target))
    return ProbeErrors(errors, bases=bases, bound_holds=holds)
