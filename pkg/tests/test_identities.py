import json
import logging
import math

import pytest
from pydantic import ValidationError

from eulerq.errors import DomainError, UnknownIdentity
from eulerq.identities import (
    CASES,
    CaseReport,
    GridSpec,
    IdentityCase,
    IdentityReport,
    evaluate_case,
    lookup,
    registry_list,
    run_checks,
)
from eulerq.qcore import Residual


def _case(residual, points=(0.5,), **kwargs) -> IdentityCase:
    return IdentityCase(
        id="sample",
        description="sample identity",
        residual=residual,
        domain=GridSpec(q_values=[0.3, 0.5], points=list(points)),
        **kwargs,
    )


class TestGridSpec:
    def test_floats_become_complex(self):
        grid = GridSpec(q_values=[0.5], points=[0.5, 2, "q^-1"])
        assert grid.points == [0.5 + 0j, 2, "q^-1"]
        assert isinstance(grid.points[1], int)

    def test_resolve(self):
        grid = GridSpec(q_values=[0.5], points=["q^3"])
        assert grid.resolve("q^3", 0.5) == 0.125
        assert grid.resolve(2, 0.5) == 2

    @pytest.mark.parametrize("q_values", [[], [0.5, 1.0]])
    def test_bad_bases(self, q_values):
        with pytest.raises(ValidationError):
            GridSpec(q_values=q_values, points=[0])

    def test_bad_text_point(self):
        with pytest.raises(ValidationError):
            GridSpec(q_values=[0.5], points=["x^2"])

    def test_no_points(self):
        with pytest.raises(ValidationError):
            GridSpec(q_values=[0.5], points=[])

    def test_merged(self):
        grid = GridSpec(q_values=[0.3, 0.5], points=[0, 1])
        merged = grid.merged(q_values=[0.9])
        assert merged.q_values == [0.9]
        assert merged.points == [0, 1]
        assert grid.merged() == grid


class TestIdentityCase:
    def test_id_is_slugified(self):
        case = IdentityCase(
            id="Sample Case",
            description="",
            residual=lambda q, x: 0.0,
            domain=GridSpec(q_values=[0.5], points=[0]),
        )
        assert case.id == "sample_case"

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValidationError):
            _case(lambda q, x: 0.0, tolerance=0)


class TestRegistry:
    def test_case_count(self):
        assert len(registry_list()) == 31

    def test_ids_unique(self):
        ids = [case.id for case in CASES]
        assert len(set(ids)) == len(ids)

    def test_lookup(self):
        case = lookup("qrecur")
        assert case.tolerance == 1e-10
        assert not case.informational

    def test_informational_case(self):
        assert lookup("limit_probes").informational

    def test_unknown(self):
        with pytest.raises(UnknownIdentity):
            lookup("no_such_id")

    def test_unknown_is_key_error(self):
        with pytest.raises(KeyError):
            lookup("no_such_id")


class TestEvaluateCase:
    def test_worst_point(self):
        case = _case(lambda q, x: Residual(q * abs(x) * 1e-12), points=(0.5, 2))
        report = evaluate_case(case)
        assert report.passed
        assert report.max_residual == pytest.approx(1e-12)
        assert report.argmax.q == 0.5
        assert report.argmax.point == 2

    def test_relative_residual(self):
        case = _case(lambda q, x: Residual(1e-6, scale=1e6))
        assert evaluate_case(case).max_residual == pytest.approx(1e-12)

    def test_nan_fails(self):
        report = evaluate_case(_case(lambda q, x: math.nan))
        assert report.max_residual == math.inf
        assert not report.passed

    def test_error_becomes_failure(self):
        def raises(q, x):
            raise DomainError("outside the domain")

        report = evaluate_case(_case(raises))
        assert not report.passed
        assert report.max_residual is None
        assert report.error == "DomainError: outside the domain"

    def test_text_point_label(self):
        case = _case(lambda q, x: Residual(abs(x - 1 / q)), points=("q^-1",))
        report = evaluate_case(case)
        assert report.argmax.point == "q^-1"
        assert report.max_residual < 1e-12


class TestReport:
    def test_json_uses_pass_key(self):
        report = run_checks(["zeta1_alt"])
        data = json.loads(report.to_json())
        assert data["cases"][0]["pass"] is True
        assert data["summary"] == {"total": 1, "passed": 1, "failed": 0, "informational": 0}

    def test_informational_cases_do_not_fail(self):
        cases = [
            CaseReport(id="a", max_residual=1.0, passed=False, tolerance=0.5, informational=True),
            CaseReport(id="b", max_residual=0.0, passed=True, tolerance=0.5),
        ]
        summary = IdentityReport.from_cases(cases).summary
        assert summary.total == 2
        assert summary.failed == 0
        assert summary.informational == 1


class TestRunChecks:
    def test_single_case(self):
        report = run_checks(["qrecur"], q_values=[0.5], points=[0.5, 2, "q^-2"])
        assert report.summary.passed == 1
        assert report.cases[0].id == "qrecur"

    @pytest.mark.parametrize(
        "identity_id",
        ["qbinom", "telescope", "zeta1_alt", "zeta2_alt", "remainder", "dominated_bound"],
    )
    def test_default_grid_passes(self, identity_id):
        assert run_checks([identity_id]).cases[0].passed

    def test_workers_keep_order(self):
        selection = ["zeta1_alt", "telescope", "qbinom_finite"]
        report = run_checks(selection, workers=3, q_values=[0.5])
        assert [case.id for case in report.cases] == selection

    def test_grid_override(self):
        grid = GridSpec(q_values=[0.7], points=[0.25])
        report = run_checks(["second_order"], grid_override=grid)
        assert report.cases[0].argmax.q == 0.7

    def test_failure_is_logged(self, caplog):
        with caplog.at_level(logging.WARNING, logger="eulerq.identities"):
            report = run_checks(["telescope"], q_values=[0.5], points=[0])
        assert report.summary.failed == 1
        assert "telescope" in caplog.text

    def test_unknown_selection(self):
        with pytest.raises(UnknownIdentity):
            run_checks(["no_such_id"])
