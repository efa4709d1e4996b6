r"""
A registry of checkable identities, each bound to its residual and its grid.

Every case maps a base q and a grid point to a residual. A case passes
when the largest relative residual over its grid is within its tolerance.

>>> lookup("qrecur").tolerance
1e-10
"""

from __future__ import annotations

import json
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator
from slugify import slugify

from eulerq.errors import QSeriesError, UnknownIdentity
from eulerq.qcore import (
    Residual,
    qbinomial_finite_residual,
    qbinomial_theorem_residual,
    residual,
    telescope_residual,
)
from eulerq.qdilog import QDilog, dilog_limit_probe, dominated_bound_check
from eulerq.qlambert import FqFunction
from eulerq.qlog import SqFunction, qlog_limit_probe
from eulerq.qzeta import QZeta

logger = logging.getLogger(__name__)

Point = Union[int, complex, str]
POWER_POINT = re.compile(r"^q\^(-?\d+)$")

DEFAULT_Q = [0.1, 0.3, 0.5, 0.7, 0.9]
DEFAULT_POINTS: List[Point] = [0, 0.5, -0.5, 1, 2, -2, 1 + 1j, "q^-1", "q^-3"]
INDICES = list(range(1, 11))


class GridSpec(BaseModel):
    """
    The bases and points a case is evaluated on.

    A point written ``"q^-3"`` stands for :math:`q^{-3}` at each base.

    >>> GridSpec(q_values=[0.5], points=["q^-2"]).resolve("q^-2", 0.5)
    4.0
    """

    model_config = ConfigDict(frozen=True)

    q_values: List[float]
    points: List[Point]

    @field_validator("q_values")
    def bases_in_unit_interval(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("A grid needs at least one base.")
        for q in v:
            if not 0 < q < 1:
                raise ValueError(f"Grid bases must satisfy 0 < q < 1, not {q}.")
        return v

    @field_validator("points", mode="before")
    def floats_to_complex(cls, v: Any) -> Any:
        if not v:
            raise ValueError("A grid needs at least one point.")
        points = []
        for point in v:
            if isinstance(point, float):
                point = complex(point)
            elif isinstance(point, str) and not POWER_POINT.match(point.strip()):
                raise ValueError(f"A text point must look like 'q^-3', not {point!r}.")
            points.append(point.strip() if isinstance(point, str) else point)
        return points

    def resolve(self, point: Point, q: float) -> Union[int, complex, float]:
        """Replace a ``"q^n"`` point by its value at base q."""
        if isinstance(point, str):
            return q ** int(POWER_POINT.match(point).group(1))
        return point

    def merged(
        self,
        q_values: Optional[List[float]] = None,
        points: Optional[List[Point]] = None,
    ) -> GridSpec:
        """Get a copy of the grid with either list replaced."""
        return GridSpec(
            q_values=q_values if q_values is not None else self.q_values,
            points=points if points is not None else self.points,
        )


class IdentityCase(BaseModel):
    """
    One checkable identity.

    :param residual:
        a function of the base q and a resolved grid point
        returning a :class:`~eulerq.qcore.Residual`

    :param informational:
        whether the case is reported without affecting the outcome of a run
    """

    model_config = ConfigDict(frozen=True)

    id: str
    description: str
    residual: Callable[[float, Any], float]
    domain: GridSpec
    tolerance: float = 1e-10
    informational: bool = False

    @field_validator("id")
    def id_is_slug(cls, v: str) -> str:
        return slugify(v, separator="_")

    @field_validator("tolerance")
    def tolerance_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"A tolerance must be positive, not {v}.")
        return v


class ArgMax(BaseModel):
    q: float
    point: Union[int, str, List[float]]


class CaseReport(BaseModel):
    """The outcome of one case over its grid."""

    model_config = ConfigDict(populate_by_name=True)

    id: str
    max_residual: Optional[float]
    argmax: Optional[ArgMax] = None
    passed: bool = Field(alias="pass")
    tolerance: float
    informational: bool = False
    error: Optional[str] = None


class ReportSummary(BaseModel):
    total: int
    passed: int
    failed: int
    informational: int


class IdentityReport(BaseModel):
    """
    The outcome of a run of cases.

    ``failed`` counts only cases that are not informational.
    """

    summary: ReportSummary
    cases: List[CaseReport]

    @classmethod
    def from_cases(cls, cases: Sequence[CaseReport]) -> IdentityReport:
        gating = [case for case in cases if not case.informational]
        passed = sum(1 for case in gating if case.passed)
        return cls(
            summary=ReportSummary(
                total=len(cases),
                passed=passed,
                failed=len(gating) - passed,
                informational=len(cases) - len(gating),
            ),
            cases=list(cases),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.model_dump(by_alias=True), indent=indent)


def _point_label(point: Point) -> Union[int, str, List[float]]:
    if isinstance(point, (int, str)):
        return point
    point = complex(point)
    return [point.real, point.imag]


def _relative(value: float) -> float:
    if isinstance(value, Residual):
        return value.relative
    return float(value)


def evaluate_case(case: IdentityCase, grid: Optional[GridSpec] = None) -> CaseReport:
    """Evaluate a case at every grid point and keep the worst residual."""
    grid = grid or case.domain
    worst: Optional[float] = None
    argmax: Optional[ArgMax] = None
    try:
        for q in grid.q_values:
            for point in grid.points:
                value = _relative(case.residual(q, grid.resolve(point, q)))
                if math.isnan(value):
                    value = math.inf
                if worst is None or value > worst:
                    worst = value
                    argmax = ArgMax(q=q, point=_point_label(point))
    except (QSeriesError, ValueError, ArithmeticError) as e:
        logger.debug("case %s raised %s", case.id, e)
        return CaseReport(
            id=case.id,
            max_residual=None,
            argmax=argmax,
            passed=False,
            tolerance=case.tolerance,
            informational=case.informational,
            error=f"{type(e).__name__}: {e}",
        )
    passed = worst is not None and worst <= case.tolerance
    return CaseReport(
        id=case.id,
        max_residual=worst,
        argmax=argmax,
        passed=passed,
        tolerance=case.tolerance,
        informational=case.informational,
    )


def _worst(values) -> Residual:
    return Residual.worst(*values)


def _flag(holds: bool) -> Residual:
    return Residual(0.0 if holds else 1.0)


def _decreasing(errors: List[float], last: int = 5) -> bool:
    tail = errors[-last:]
    return all(later < earlier for earlier, later in zip(tail, tail[1:]))


def _qbinom(q: float, x: complex) -> Residual:
    return _worst(qbinomial_theorem_residual(a, x, q) for a in (0.4, 1, -2, 1 + 1j))


def _qbinom_finite(q: float, z: complex) -> Residual:
    return _worst(qbinomial_finite_residual(z, k, q) for k in range(21))


def _sq_taylor(q: float, x: complex) -> Residual:
    S = SqFunction(q=q)
    value = S.s_q(x)
    return _worst(
        residual(form(x), value) for form in (S.s_q_taylor, S.s_q_phi_taylor, S.s_q_phi32)
    )


def _sq_onemxk(q: float, x: complex) -> Residual:
    S = SqFunction(q=q)
    return residual(S.s_q_onemxk(x), S.s_q(x))


def _sq_qintegral(q: float, x: complex) -> Residual:
    S = SqFunction(q=q)
    return residual(S.s_q_via_qintegral(x), S.s_q(x))


def _g_dualform(q: float, x: complex) -> Residual:
    S = SqFunction(q=q)
    residuals = []
    for t in (0.5, -0.3, 0.2 + 0.5j):
        series = S.g_kernel(x, t)
        residuals.extend(
            residual(S.g_kernel(x, t, form=form), series)
            for form in ("alternate", "phi21", "phi11")
        )
    return _worst(residuals)


def _qrecur(q: float, x: complex) -> Residual:
    return SqFunction(q=q).qrecur_residual(x)


def _second_order(q: float, x: complex) -> Residual:
    return SqFunction(q=q).second_order_residual(x)


def _sq_qn(q: float, n: int) -> Residual:
    S = SqFunction(q=q)
    closed = S.s_q_at_qn(n)
    residuals = [
        residual(S.s_q(q**n), closed),
        residual(S.s_q(q**-n), n),
        residual(S.euler_recursion(n)[n], closed),
    ]
    if n >= 2:
        residuals.append(S.euler_sequence_residual(n))
    return _worst(residuals)


def _sumform1(q: float, n: int) -> Residual:
    return SqFunction(q=q).summation_residuals(n)[0]


def _sumform2(q: float, n: int) -> Residual:
    return SqFunction(q=q).summation_residuals(n)[1]


def _zeta1_alt(q: float, point: Any) -> Residual:
    Z = QZeta(q=q)
    return residual(Z.zeta_q(1), Z.zeta1_alternating())


def _fq_equals_sq(q: float, x: complex) -> Residual:
    return FqFunction(q=q).fq_equals_sq_residual(x)


def _fq_divisor(q: float, x: complex) -> Residual:
    F = FqFunction(q=q)
    return _worst(
        residual(F.f_q_divisor_expansion(x, t), F.f_q(x, t)) for t in (0.2, 0.5, 0.8)
    )


def _fq_xexp(q: float, x: complex) -> Residual:
    F = FqFunction(q=q)
    return _worst(residual(F.f_q_x_expansion(x, t), F.f_q(x, t)) for t in (0.2, 0.5, 0.8))


def _qgauss_spec(q: float, l: int) -> Residual:
    return _worst(FqFunction(q=q).gauss_specialization_residual(l))


def _quad_transform(q: float, j: int) -> Residual:
    return _worst(FqFunction(q=q).quadratic_transform_residual(j))


def _fq_qintegral(q: float, x: complex) -> Residual:
    F = FqFunction(q=q)
    return _worst(residual(F.f_q_via_qintegral(x, p), F.f_q(x, p)) for p in (0.2, 0.5, 0.8))


def _li2_specials(q: float, n: int) -> Residual:
    L = QDilog(q=q)
    return _worst(
        [
            residual(L.li2q(q**-n), L.special_value(n)),
            residual(L.li2q(1), 0),
            residual(L.li2q(0), L.zeta.zeta_q(2)),
        ]
    )


def _li2_qdiff(q: float, x: complex) -> Residual:
    L = QDilog(q=q)
    residuals = [L.li2q_qdiff_residual(x)]
    if x != 0:
        residuals.append(L.derivative_form_residual(x))
    return _worst(residuals)


def _li2_taylor(q: float, x: complex) -> Residual:
    L = QDilog(q=q)
    return residual(L.li2q_taylor(x), L.li2q(x))


def _li2_qintegral(q: float, x: complex) -> Residual:
    L = QDilog(q=q)
    return residual(L.li2q_via_qintegral(x), L.li2q(x))


def _sumform_li(q: float, n: int) -> Residual:
    return QDilog(q=q).sumform_li_residual(n)


def _zeta2_alt(q: float, point: Any) -> Residual:
    Z = QZeta(q=q)
    return residual(Z.zeta_q(2), Z.zeta2_alternating())


def _zeta2_rearr(q: float, point: Any) -> Residual:
    Z = QZeta(q=q)
    return _worst(
        [Z.zeta2_rearrangement_residual(), residual(Z.zeta_q(2), Z.zeta2_double_sum())]
    )


def _remainder(q: float, n: int) -> Residual:
    return QDilog(q=q).remainder_relation_residual(n)


def _coeff_relation(q: float, n: int) -> Residual:
    return QDilog(q=q).coefficient_relation_residual(n)


def _growth_bounds(q: float, r: complex) -> Residual:
    return _flag(SqFunction(q=q).growth_bound_check(complex(r).real))


def _dominated_bound(q: float, x: complex) -> Residual:
    return _flag(dominated_bound_check(q, x=x))


def _limit_probes(q: float, x: complex) -> Residual:
    x = complex(x).real
    holds = True
    if x > 0:
        holds = holds and _decreasing(qlog_limit_probe(x, 12))
    if abs(1 - x) <= 1:
        probe = dilog_limit_probe(x, 12)
        holds = holds and probe.bound_held and _decreasing(probe)
    return _flag(holds)


def _grid(
    points: Sequence[Point], q_values: Optional[Sequence[float]] = None
) -> GridSpec:
    return GridSpec(q_values=list(q_values or DEFAULT_Q), points=list(points))


def _without(*excluded: Point) -> List[Point]:
    return [point for point in DEFAULT_POINTS if point not in excluded]


LATE_Q = [0.5, 0.7, 0.9]
KERNEL_POINTS: List[Point] = [0, 0.5, -0.5, 1, 2, -2, 1 + 1j]

CASES: Tuple[IdentityCase, ...] = tuple(
    IdentityCase(**fields)
    for fields in [
        dict(
            id="qbinom",
            description="q-binomial theorem (ax;q)_inf/(x;q)_inf = sum (a;q)_j x^j/(q;q)_j",
            residual=_qbinom,
            domain=_grid([0, 0.5, -0.5, 0.3 + 0.4j]),
        ),
        dict(
            id="qbinom_finite",
            description="terminating q-binomial theorem for (z;q)_k, k <= 20",
            residual=_qbinom_finite,
            domain=_grid([0.5, -2, 1 + 1j, 2j]),
        ),
        dict(
            id="telescope",
            description="sum q^k (x;q)_k = (1 - (x;q)_inf)/x",
            residual=lambda q, x: telescope_residual(x, q),
            domain=_grid(_without(0)),
        ),
        dict(
            id="sq_taylor",
            description="Taylor series and hypergeometric forms of S_q",
            residual=_sq_taylor,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="sq_onemxk",
            description="expansion of S_q in powers 1 - x^k",
            residual=_sq_onemxk,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="sq_qintegral",
            description="S_q as a Jackson integral of the kernel G_q",
            residual=_sq_qintegral,
            domain=_grid(DEFAULT_POINTS),
            tolerance=1e-9,
        ),
        dict(
            id="g_dualform",
            description="four representations of the kernel G_q(x, t)",
            residual=_g_dualform,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="qrecur",
            description="S_q(x/q) - S_q(x) = 1 - (x;q)_inf",
            residual=_qrecur,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="second_order",
            description="second order q-difference equation of S_q",
            residual=_second_order,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="sq_qn",
            description="S_q at q^n and q^-n, and Euler's recursion",
            residual=_sq_qn,
            domain=_grid(INDICES),
        ),
        dict(
            id="sumform1",
            description="summation formulas from S_q(q^-n) = n",
            residual=_sumform1,
            domain=_grid(range(7), LATE_Q),
        ),
        dict(
            id="sumform2",
            description="summation formulas from the closed form of S_q(q^n)",
            residual=_sumform2,
            domain=_grid(range(7), LATE_Q),
        ),
        dict(
            id="zeta1_alt",
            description="alternating series for zeta_q(1)",
            residual=_zeta1_alt,
            domain=_grid([0]),
        ),
        dict(
            id="fq_equals_sq",
            description="F_q(x, q) = S_q(x)",
            residual=_fq_equals_sq,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="fq_divisor",
            description="divisor-sum expansion of F_q in powers of t",
            residual=_fq_divisor,
            domain=_grid(_without("q^-3")),
        ),
        dict(
            id="fq_xexp",
            description="expansion of F_q in powers of x",
            residual=_fq_xexp,
            domain=_grid(_without("q^-3")),
        ),
        dict(
            id="qgauss_spec",
            description="q-Gauss sum at (q, q, q^(l+2)) and the sum it implies",
            residual=_qgauss_spec,
            domain=_grid(range(1, 16)),
        ),
        dict(
            id="quad_transform",
            description="quadratic transformation of the sum at t = q^2",
            residual=_quad_transform,
            domain=_grid(INDICES),
        ),
        dict(
            id="fq_qintegral",
            description="F_q(x, p) as a Jackson integral with base p",
            residual=_fq_qintegral,
            domain=_grid(KERNEL_POINTS),
            tolerance=1e-9,
        ),
        dict(
            id="li2_specials",
            description="Li2(1;q) = 0, Li2(0;q) = zeta_q(2) and Li2(q^-n;q)",
            residual=_li2_specials,
            domain=_grid(range(11)),
        ),
        dict(
            id="li2_qdiff",
            description="q-difference relation of Li2(x;q)",
            residual=_li2_qdiff,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="li2_taylor",
            description="Taylor series of Li2(x;q)",
            residual=_li2_taylor,
            domain=_grid(DEFAULT_POINTS),
        ),
        dict(
            id="li2_qintegral",
            description="Li2(x;q) as zeta_q(2) plus a Jackson integral of S_q",
            residual=_li2_qintegral,
            domain=_grid([0, 0.5, -0.5, 2, -2, 1 + 1j]),
            tolerance=1e-9,
        ),
        dict(
            id="sumform_li",
            description="summation formula from Li2(q^-n;q)",
            residual=_sumform_li,
            domain=_grid(range(7), LATE_Q),
        ),
        dict(
            id="zeta2_alt",
            description="alternating series for zeta_q(2)",
            residual=_zeta2_alt,
            domain=_grid([0]),
        ),
        dict(
            id="zeta2_rearr",
            description="rearrangements of the double sum for zeta_q(2)",
            residual=_zeta2_rearr,
            domain=_grid([0]),
        ),
        dict(
            id="remainder",
            description="closed remainder of the alternating series for zeta_q(1)",
            residual=_remainder,
            domain=_grid(range(1, 9)),
        ),
        dict(
            id="coeff_relation",
            description="Taylor coefficients of Li2(x;q) against those of S_q",
            residual=_coeff_relation,
            domain=_grid(range(1, 13)),
        ),
        dict(
            id="growth_bounds",
            description="lower and upper bounds for the maximum modulus of S_q",
            residual=_growth_bounds,
            domain=_grid([0.1, 1, 10, 100], [0.3, 0.5, 0.9]),
            tolerance=0.5,
        ),
        dict(
            id="dominated_bound",
            description="termwise bound 1/k^2 for the rescaled Li2 series",
            residual=_dominated_bound,
            domain=_grid([0, 0.5, 1, 2, 1 + 1j, 0.5 + 0.5j], [0.3, 0.5, 0.9, 0.99]),
            tolerance=0.5,
        ),
        dict(
            id="limit_probes",
            description="(1-q)S_q(x) and (1-q)^2 Li2(x;q) approach log x and Li2(1-x)",
            residual=_limit_probes,
            domain=_grid([0.5, 2, 0], [0.5]),
            tolerance=0.5,
            informational=True,
        ),
    ]
)

_BY_ID: Dict[str, IdentityCase] = {case.id: case for case in CASES}


def registry_list() -> List[IdentityCase]:
    """Get every registered case."""
    return list(CASES)


def lookup(identity_id: str) -> IdentityCase:
    """Find a case by its id."""
    try:
        return _BY_ID[identity_id]
    except KeyError:
        raise UnknownIdentity(f"No identity is registered with the id {identity_id!r}.")


def run_checks(
    selection: Optional[Sequence[str]] = None,
    grid_override: Optional[GridSpec] = None,
    workers: int = 1,
    q_values: Optional[List[float]] = None,
    points: Optional[List[Point]] = None,
) -> IdentityReport:
    """
    Evaluate the selected cases.

    :param selection:
        ids of the cases to run, in order; every case when None

    :param grid_override:
        a grid used instead of each case's own

    :param workers:
        number of threads evaluating cases; reports keep the selection order

    :param q_values:
        bases replacing those of each case's grid

    :param points:
        points replacing those of each case's grid
    """
    cases = [lookup(i) for i in selection] if selection else registry_list()

    def check(case: IdentityCase) -> CaseReport:
        grid = grid_override or case.domain.merged(q_values=q_values, points=points)
        report = evaluate_case(case, grid)
        if not report.passed:
            log = logger.info if case.informational else logger.warning
            log(
                "identity %s failed: max residual %s, %s",
                case.id,
                report.max_residual,
                report.error or f"tolerance {case.tolerance}",
            )
        return report

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(check, cases))
    else:
        reports = [check(case) for case in cases]
    return IdentityReport.from_cases(reports)
