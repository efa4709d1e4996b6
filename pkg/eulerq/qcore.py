"""
Primitives of q-calculus.

Finite and infinite q-Pochhammer symbols, q-binomial coefficients,
the two q-exponentials, the q-binomial theorem and q-difference
operators, together with the value types and the truncation rules
shared by every other module.
"""

from __future__ import annotations

import cmath
import logging
import math
import os
from typing import Any, Callable, ClassVar, Iterable, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from eulerq.errors import DivergentSeries, DomainError, MaxTermsExceeded, PoleError

logger = logging.getLogger(__name__)

ZERO_TOL = 1e-13
ROUNDING = 2.0**-52

Number = Union[int, float, complex]


class QParam(BaseModel):
    """
    The base of every q-series in the library.

    >>> QParam(q=0.5).inverse
    2.0

    :param q:
        a real number strictly between 0 and 1
    """

    model_config = ConfigDict(frozen=True)

    q: float

    @field_validator("q")
    def q_in_unit_interval(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError(f"The base q must satisfy 0 < q < 1, not {v}.")
        return v

    @property
    def inverse(self) -> float:
        """Euler's base a, written as 1/q."""
        return 1 / self.q


QLike = Union[QParam, float]


def q_value(q: QLike) -> float:
    """Get a validated float base from a QParam or a bare number."""
    if isinstance(q, QParam):
        return q.q
    return QParam(q=q).q


class EvalConfig(BaseModel):
    r"""
    Truncation settings for series and product evaluation.

    :param eps:
        target relative tolerance of each truncated sum

    :param min_terms:
        number of terms evaluated before any stopping rule applies

    :param max_terms:
        number of terms after which evaluation gives up with
        :class:`~eulerq.errors.MaxTermsExceeded`
    """

    model_config = ConfigDict(frozen=True)

    eps: float = 1e-14
    min_terms: int = 8
    max_terms: int = 100000

    env_prefix: ClassVar[str] = "EULERQ_"

    @field_validator("eps")
    def eps_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"eps must be positive, not {v}.")
        return v

    @field_validator("min_terms", "max_terms")
    def counts_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"Term counts must be positive, not {v}.")
        return v

    @model_validator(mode="after")
    def min_not_above_max(self) -> EvalConfig:
        if self.min_terms > self.max_terms:
            raise ValueError(
                f"min_terms ({self.min_terms}) cannot exceed max_terms ({self.max_terms})."
            )
        return self

    @classmethod
    def from_env(
        cls, environ: Optional[Mapping[str, str]] = None, **overrides: Any
    ) -> EvalConfig:
        """
        Build a config from environment variables and explicit overrides.

        Reads ``EULERQ_EPS``, ``EULERQ_MIN_TERMS`` and ``EULERQ_MAX_TERMS``.
        Overrides that are not None take precedence over the environment.
        """
        environ = os.environ if environ is None else environ
        values = {}
        for name in cls.model_fields:
            raw = environ.get(cls.env_prefix + name.upper())
            if raw is not None and raw.strip():
                values[name] = raw.strip()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def widened(self, max_terms: int) -> EvalConfig:
        """Get a copy allowing at least ``max_terms`` terms."""
        if max_terms <= self.max_terms:
            return self
        return self.model_copy(update={"max_terms": max_terms})


DEFAULT_CONFIG = EvalConfig()


class SeriesValue(BaseModel):
    r"""
    A truncated evaluation with its error estimate.

    Arithmetic between values propagates the error estimates to first order.

    >>> total = SeriesValue(value=1, err_estimate=1e-15, terms_used=3) * 2
    >>> total.value, total.err_estimate
    ((2+0j), 2e-15)

    :param value:
        the computed number

    :param err_estimate:
        estimated absolute error, combining the truncated tail
        and accumulated rounding

    :param terms_used:
        number of terms or factors that were evaluated

    :param mass:
        sum of the magnitudes of the evaluated terms, a measure
        of the cancellation that produced ``value``
    """

    model_config = ConfigDict(frozen=True)

    value: complex
    err_estimate: float = 0.0
    terms_used: int = 0
    mass: float = 0.0

    @field_validator("err_estimate", "mass")
    def nonnegative(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f"Error estimates and masses cannot be negative, not {v}.")
        return v

    @field_validator("terms_used")
    def nonnegative_count(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"terms_used cannot be negative, not {v}.")
        return v

    @model_validator(mode="before")
    def mass_covers_value(cls, values: Any) -> Any:
        if isinstance(values, dict) and isinstance(values.get("value"), (int, float, complex)):
            floor = abs(values["value"])
            if values.get("mass", 0.0) < floor:
                values = {**values, "mass": floor}
        return values

    @classmethod
    def exact(cls, value: Number, terms_used: int = 1) -> SeriesValue:
        """Wrap a value computed by finitely many operations."""
        return cls(
            value=value,
            err_estimate=ROUNDING * abs(value) * max(terms_used, 1),
            terms_used=terms_used,
        )

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)

    def __neg__(self) -> SeriesValue:
        return self.model_copy(update={"value": -self.value})

    def __add__(self, other: Union[SeriesValue, Number]) -> SeriesValue:
        if isinstance(other, SeriesValue):
            return SeriesValue(
                value=self.value + other.value,
                err_estimate=self.err_estimate + other.err_estimate,
                terms_used=self.terms_used + other.terms_used,
                mass=self.mass + other.mass,
            )
        return SeriesValue(
            value=self.value + other,
            err_estimate=self.err_estimate,
            terms_used=self.terms_used,
            mass=self.mass + abs(other),
        )

    __radd__ = __add__

    def __sub__(self, other: Union[SeriesValue, Number]) -> SeriesValue:
        return self + (-other)

    def __rsub__(self, other: Number) -> SeriesValue:
        return (-self) + other

    def __mul__(self, other: Union[SeriesValue, Number]) -> SeriesValue:
        if isinstance(other, SeriesValue):
            return SeriesValue(
                value=self.value * other.value,
                err_estimate=abs(self.value) * other.err_estimate
                + abs(other.value) * self.err_estimate
                + self.err_estimate * other.err_estimate,
                terms_used=self.terms_used + other.terms_used,
                mass=self.mass * other.mass,
            )
        return SeriesValue(
            value=self.value * other,
            err_estimate=self.err_estimate * abs(other),
            terms_used=self.terms_used,
            mass=self.mass * abs(other),
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Union[SeriesValue, Number]) -> SeriesValue:
        if isinstance(other, SeriesValue):
            if other.value == 0:
                raise PoleError("Division by a series value equal to zero.")
            quotient = self.value / other.value
            return SeriesValue(
                value=quotient,
                err_estimate=(self.err_estimate + abs(quotient) * other.err_estimate)
                / abs(other.value),
                terms_used=self.terms_used + other.terms_used,
                mass=self.mass / abs(other.value),
            )
        return self * (1 / other)

    def __rtruediv__(self, other: Number) -> SeriesValue:
        return SeriesValue.exact(other, terms_used=0) / self


class Residual(float):
    """
    The absolute difference between two sides of an identity.

    Behaves as the float ``|lhs - rhs|`` and also records the scale of
    the quantities that entered the identity, at least 1.

    >>> r = Residual(3e-12, scale=2.0)
    >>> float(r), r.relative
    (3e-12, 1.5e-12)
    """

    scale: float

    def __new__(cls, value: float, scale: float = 1.0) -> Residual:
        obj = super().__new__(cls, value)
        obj.scale = max(1.0, float(scale))
        return obj

    @property
    def relative(self) -> float:
        """The residual divided by its scale."""
        return float(self) / self.scale

    @classmethod
    def worst(cls, *residuals: Residual) -> Residual:
        """Get the residual with the largest relative value."""
        return max(residuals, key=lambda r: (r.relative, float(r)))

    def __repr__(self) -> str:
        return f"Residual({float(self)!r}, scale={self.scale!r})"


def as_value(value: Union[SeriesValue, Number]) -> SeriesValue:
    """Coerce a bare number into a SeriesValue."""
    if isinstance(value, SeriesValue):
        return value
    return SeriesValue.exact(value, terms_used=0)


def residual(lhs: Union[SeriesValue, Number], rhs: Union[SeriesValue, Number]) -> Residual:
    """
    Compare two evaluations of the same quantity.

    :returns:
        ``|lhs - rhs|`` scaled by the largest magnitude involved,
        counting the masses of the two sides
    """
    left, right = as_value(lhs), as_value(rhs)
    return Residual(
        abs(left.value - right.value),
        scale=max(left.mass, right.mass),
    )


def _snap(factor: complex) -> complex:
    return 0j if abs(factor) < ZERO_TOL else factor


def sum_series(
    terms: Iterable[Union[SeriesValue, Number]],
    cfg: Optional[EvalConfig] = None,
    ratio_cap: float = 0.5,
    label: str = "series",
) -> SeriesValue:
    r"""
    Sum a convergent series under the library's truncation rule.

    Summation stops once two consecutive terms satisfy
    ``|term| <= eps * max(|partial|, 1)`` after at least ``min_terms`` terms.
    The tail is estimated as ``|last| / (1 - rho)``, where ``rho`` is the
    observed ratio of the last two terms capped at ``ratio_cap``.
    A finite iterable that runs out is summed exactly.

    :param terms:
        the terms of the series; a term may be a :class:`SeriesValue`,
        whose error estimate is added to the result's

    :param ratio_cap:
        upper bound for the eventual ratio of consecutive terms

    :param label:
        name of the series for log and error messages
    """
    cfg = cfg or DEFAULT_CONFIG
    cap = min(ratio_cap, 1 - 1e-9)
    partial = 0j
    mass = 0.0
    inherited = 0.0
    small_run = 0
    previous = 0.0
    count = 0
    for term in terms:
        if isinstance(term, SeriesValue):
            inherited += term.err_estimate
            mass += term.mass
            term = term.value
        else:
            mass += abs(term)
        count += 1
        partial += term
        size = abs(term)
        if not cmath.isfinite(partial):
            raise DivergentSeries(f"The {label} overflowed after {count} terms.")
        if size <= cfg.eps * max(abs(partial), 1.0):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 2 and count >= cfg.min_terms:
            rho = min(size / previous, cap) if previous > 0 else 0.0
            tail = size / (1 - rho)
            logger.debug("%s truncated after %d terms", label, count)
            return SeriesValue(
                value=partial,
                err_estimate=tail + ROUNDING * mass + inherited,
                terms_used=count,
                mass=mass,
            )
        if count >= cfg.max_terms:
            raise MaxTermsExceeded(
                f"The {label} did not converge within {cfg.max_terms} terms.",
                terms_used=count,
                partial=partial,
            )
        previous = size
    return SeriesValue(
        value=partial,
        err_estimate=ROUNDING * mass + inherited,
        terms_used=count,
        mass=mass,
    )


def finite_sum(terms: Iterable[Union[SeriesValue, Number]]) -> SeriesValue:
    """Add up every term of a finite sum, tracking rounding and mass."""
    total = 0j
    mass = 0.0
    inherited = 0.0
    count = 0
    for term in terms:
        if isinstance(term, SeriesValue):
            inherited += term.err_estimate
            mass += term.mass
            term = term.value
        else:
            mass += abs(term)
        total += term
        count += 1
    return SeriesValue(
        value=total,
        err_estimate=ROUNDING * mass + inherited,
        terms_used=count,
        mass=mass,
    )


def qpochhammer(x: Number, q: QLike, k: int) -> complex:
    r"""
    Compute the finite q-Pochhammer symbol :math:`(x;q)_k`.

    >>> qpochhammer(0.5, 0.5, 2)
    (0.375+0j)

    :returns:
        the product of ``1 - x q^j`` for ``j`` from 0 to ``k - 1``
    """
    base = q_value(q)
    if k < 0 or int(k) != k:
        raise DomainError(f"The length of a q-Pochhammer symbol must be a nonnegative integer, not {k}.")
    product = 1 + 0j
    for j in range(int(k)):
        product *= _snap(1 - x * base**j)
    return product


def qpochhammer_inf(
    x: Number, q: QLike, cfg: Optional[EvalConfig] = None
) -> SeriesValue:
    r"""
    Compute the infinite product :math:`(x;q)_\infty`.

    The product is exactly zero when a factor ``1 - x q^j`` is within
    ``1e-13`` of zero, which happens at ``x = q^-n``.

    >>> qpochhammer_inf(0, 0.5).value
    (1+0j)
    >>> qpochhammer_inf(1, 0.7).value
    0j
    """
    cfg = cfg or DEFAULT_CONFIG
    base = q_value(q)
    size = abs(x)
    product = 1 + 0j
    largest = 1.0
    j = 0
    while True:
        xq = x * base**j
        factor = 1 - xq
        if abs(factor) < ZERO_TOL:
            logger.debug("(%r;%r)_inf vanishes at factor %d", x, base, j)
            return SeriesValue(value=0j, err_estimate=0.0, terms_used=j + 1)
        product *= factor
        largest = max(largest, abs(product))
        j += 1
        if j >= cfg.min_terms and size * base**j < cfg.eps / 4:
            break
        if j >= cfg.max_terms:
            raise MaxTermsExceeded(
                f"The product ({x};{base})_inf did not converge within {cfg.max_terms} factors.",
                terms_used=j,
                partial=product,
            )
    tail = abs(product) * size * base**j / (1 - base)
    return SeriesValue(
        value=product,
        err_estimate=tail + ROUNDING * j * largest,
        terms_used=j,
    )


def qbinomial_coeff(k: int, j: int, q: QLike) -> float:
    r"""
    Compute the q-binomial coefficient.

    >>> qbinomial_coeff(2, 1, 0.5)
    1.5

    :returns:
        :math:`(q;q)_k / ((q;q)_j (q;q)_{k-j})`
    """
    base = q_value(q)
    if not 0 <= j <= k:
        raise DomainError(f"A q-binomial coefficient needs 0 <= j <= k, not j={j}, k={k}.")
    numerator = qpochhammer(base, base, k).real
    return numerator / (qpochhammer(base, base, j).real * qpochhammer(base, base, k - j).real)


def _check_form(form: str, allowed: Iterable[str]) -> None:
    allowed = tuple(allowed)
    if form not in allowed:
        raise DomainError(f"form must be one of {allowed}, not {form!r}.")


def e_q(
    z: Number,
    q: QLike,
    cfg: Optional[EvalConfig] = None,
    form: str = "auto",
) -> SeriesValue:
    r"""
    Compute the q-exponential :math:`e_q(z) = 1/(z;q)_\infty`.

    The ``"series"`` form sums :math:`\sum z^n/(q;q)_n` and needs
    ``|z| < 1``. The ``"product"`` form takes the reciprocal of the
    infinite product. ``"auto"`` picks the series inside the unit disc.
    """
    _check_form(form, ("auto", "series", "product"))
    cfg = cfg or DEFAULT_CONFIG
    base = q_value(q)
    if form == "auto":
        form = "series" if abs(z) < 1 else "product"
    if form == "product":
        product = qpochhammer_inf(z, base, cfg)
        if product.value == 0:
            raise PoleError(f"e_q has a pole at z={z}, since (z;q)_inf vanishes there.")
        return 1 / product
    if abs(z) >= 1:
        raise DivergentSeries(f"The series for e_q needs |z| < 1, not |z|={abs(z)}.")

    def terms():
        term = 1 + 0j
        n = 0
        while True:
            yield term
            n += 1
            term *= z / (1 - base**n)

    return sum_series(terms(), cfg, ratio_cap=max(abs(z), base), label="e_q series")


def E_q(
    z: Number,
    q: QLike,
    cfg: Optional[EvalConfig] = None,
    form: str = "auto",
) -> SeriesValue:
    r"""
    Compute the q-exponential :math:`E_q(z) = (-z;q)_\infty`.

    The ``"series"`` form sums :math:`\sum q^{n(n-1)/2} z^n/(q;q)_n`,
    which converges for every z. ``"auto"`` uses the product.
    """
    _check_form(form, ("auto", "series", "product"))
    cfg = cfg or DEFAULT_CONFIG
    base = q_value(q)
    if form in ("auto", "product"):
        return qpochhammer_inf(-z, base, cfg)

    def terms():
        term = 1 + 0j
        n = 0
        while True:
            yield term
            term *= base**n * z / (1 - base ** (n + 1))
            n += 1

    return sum_series(terms(), cfg, ratio_cap=base, label="E_q series")


def qbinomial_theorem_residual(
    a: Number, x: Number, q: QLike, cfg: Optional[EvalConfig] = None
) -> Residual:
    r"""
    Check the q-binomial theorem at one point.

    :returns:
        :math:`|(ax;q)_\infty/(x;q)_\infty - \sum_j (a;q)_j x^j/(q;q)_j|`
    """
    cfg = cfg or DEFAULT_CONFIG
    base = q_value(q)
    if abs(x) >= 1:
        raise DomainError(f"The q-binomial theorem needs |x| < 1, not |x|={abs(x)}.")
    denominator = qpochhammer_inf(x, base, cfg)
    if denominator.value == 0:
        raise PoleError(f"(x;q)_inf vanishes at x={x}.")
    product_side = qpochhammer_inf(a * x, base, cfg) / denominator

    def terms():
        term = 1 + 0j
        j = 0
        while True:
            yield term
            term *= _snap(1 - a * base**j) * x / (1 - base ** (j + 1))
            j += 1

    series_side = sum_series(
        terms(), cfg, ratio_cap=max(abs(x), base), label="q-binomial series"
    )
    return residual(product_side, series_side)


def qbinomial_finite_residual(z: Number, k: int, q: QLike) -> Residual:
    r"""
    Check the terminating q-binomial theorem.

    :returns:
        the residual of
        :math:`(z;q)_k = \sum_{j=0}^k [k, j]_q q^{j(j-1)/2} (-z)^j`
    """
    base = q_value(q)
    product_side = qpochhammer(z, base, k)
    series_side = finite_sum(
        qbinomial_coeff(k, j, base) * base ** (j * (j - 1) / 2) * (-z) ** j
        for j in range(k + 1)
    )
    return residual(SeriesValue.exact(product_side, terms_used=k), series_side)


def telescope_residual(
    x: Number, q: QLike, cfg: Optional[EvalConfig] = None
) -> Residual:
    r"""
    Check the telescoping sum :math:`\sum_k q^k (x;q)_k = (1 - (x;q)_\infty)/x`.
    """
    cfg = cfg or DEFAULT_CONFIG
    base = q_value(q)
    if x == 0:
        raise DomainError("The telescoping identity needs x != 0.")

    def terms():
        term = 1 + 0j
        k = 0
        while True:
            yield term
            term *= base * _snap(1 - x * base**k)
            k += 1

    series_side = sum_series(terms(), cfg, ratio_cap=base, label="telescoping series")
    product_side = (1 - qpochhammer_inf(x, base, cfg)) / x
    return residual(series_side, product_side)


def _as_complex(value: Union[SeriesValue, Number]) -> complex:
    return value.value if isinstance(value, SeriesValue) else complex(value)


def d_q(f: Callable[[complex], Any], x: Number, q: QLike) -> complex:
    r"""Apply the q-difference operator :math:`(f(qx) - f(x))/(x(q - 1))`."""
    base = q_value(q)
    if x == 0:
        raise DomainError("The q-difference operator is undefined at x = 0.")
    return (_as_complex(f(base * x)) - _as_complex(f(x))) / (x * (base - 1))


def d_q_inv(f: Callable[[complex], Any], x: Number, q: QLike) -> complex:
    """Apply the q-difference operator with base 1/q."""
    base = q_value(q)
    if x == 0:
        raise DomainError("The q-difference operator is undefined at x = 0.")
    inverse = 1 / base
    return (_as_complex(f(inverse * x)) - _as_complex(f(x))) / (x * (inverse - 1))


def reduction_steps(x: Number, q: float) -> int:
    """
    Count the factors of q needed to bring x into the closed unit disc.

    >>> reduction_steps(8, 0.5)
    3
    """
    size = abs(x)
    if size <= 1:
        return 0
    return max(0, math.ceil(math.log(size) / math.log(1 / q) - 1e-9))


def coerce_base(values: Any, field: str = "q") -> Any:
    """Let a model accept a bare float wherever it expects a QParam."""
    if isinstance(values, dict) and isinstance(values.get(field), (int, float)):
        values = {**values, field: QParam(q=values[field])}
    return values
