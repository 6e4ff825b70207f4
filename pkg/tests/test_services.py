"""
Unit tests for the service layer: exponent tables, verification suites,
sweeps, subspaces, report writing and run configuration.
"""
import csv
import io
import json
import math
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from ffharmonic.errors import BudgetExceeded, SearchFailed
from ffharmonic.field import make_field
from ffharmonic.models import CaseKind, SearchClass
from ffharmonic.restriction import first_j_for_case
from models.reports import CheckResult, SubspaceRow, Summary, VerifyReport
from models.run_config import JRule, OutputFormat, RunConfig, format_exponent, parse_exponent
from services.cells import cell_rng, run_cells
from services.exponent_service import ExponentService
from services.report_writer import ReportWriter
from services.subspace_service import SubspaceService
from services.sweep_service import SweepCell, SweepService
from services.verification_service import VerificationService


class TestRunConfig:
    """Tests for RunConfig validation."""

    def test_defaults(self):
        """Test the default grid and exponents."""
        config = RunConfig(subcommand="verify")
        assert config.qs == [3, 5]
        assert config.p_value is None
        assert config.r_value == 2

    def test_rejects_composite_q(self):
        """Test that q = 4 fails validation with the error type in the message."""
        with pytest.raises(ValidationError, match="NotPrime"):
            RunConfig(subcommand="verify", qs=[4])

    def test_rejects_even_characteristic(self):
        """Test that q = 2 fails validation."""
        with pytest.raises(ValidationError, match="EvenCharacteristic"):
            RunConfig(subcommand="verify", qs=[2])

    def test_unknown_tolerance(self):
        """Test that unknown tolerance keys are rejected."""
        with pytest.raises(ValidationError):
            RunConfig(subcommand="verify", tolerances={"nope": 1e-3})

    def test_explicit_rule_needs_js(self):
        """Test that the explicit rule needs at least one j."""
        with pytest.raises(ValidationError):
            RunConfig(subcommand="sweep", j_rule=JRule.EXPLICIT)

    def test_auto_target_exponent(self):
        """Test that r = auto is rejected."""
        with pytest.raises(ValidationError):
            RunConfig(subcommand="sweep", r="auto")

    @pytest.mark.parametrize(
        "rule, expected",
        [(JRule.ALL, [1, 2, 3, 4, 5, 6]), (JRule.SQUARES, [1, 2, 4]), (JRule.NONSQUARES, [3, 5, 6])],
    )
    def test_resolve_js(self, rule, expected):
        """Test the j rules mod 7."""
        assert RunConfig(subcommand="sweep", qs=[7], j_rule=rule).resolve_js(7) == expected

    def test_explicit_js_are_reduced(self):
        """Test that explicit js are reduced mod q, deduplicated and stripped of zero."""
        config = RunConfig(subcommand="sweep", qs=[5], j_rule=JRule.EXPLICIT, js=[7, 2, 5, 12])
        assert config.resolve_js(5) == [2]

    def test_tolerance_override(self):
        """Test that an override replaces the default."""
        config = RunConfig(subcommand="verify", tolerances={"transfer": 1e-6})
        assert config.tolerance("transfer") == 1e-6
        assert config.tolerance("gauss") == 1e-9


class TestExponentParsing:
    """Tests for parse_exponent and format_exponent."""

    @pytest.mark.parametrize("text, expected", [("8/5", "8/5"), ("2", "2"), ("1.5", "3/2"), ("inf", "inf")])
    def test_round_trip_text(self, text, expected):
        """Test parsing then formatting exponents."""
        assert format_exponent(parse_exponent(text)) == expected

    def test_auto(self):
        """Test that auto parses to None."""
        assert parse_exponent("auto") is None

    def test_below_one(self):
        """Test that exponents below 1 are rejected."""
        with pytest.raises(ValueError):
            parse_exponent("1/2")


class TestCells:
    """Tests for per-cell seeding and the worker pool."""

    def test_cell_rng_is_deterministic(self):
        """Test that one (seed, label, cell) always yields the same stream."""
        assert cell_rng(3, "grid", 5, 2).integers(1 << 30) == cell_rng(3, "grid", 5, 2).integers(1 << 30)

    def test_cell_rng_separates_cells(self):
        """Test that different cells get different streams."""
        first = cell_rng(0, "grid", 3, 2).integers(1 << 62, size=4).tolist()
        second = cell_rng(0, "grid", 3, 3).integers(1 << 62, size=4).tolist()
        assert first != second

    def test_run_cells_keeps_order(self):
        """Test that serial and parallel runs return results in cell order."""
        assert run_cells(math.factorial, [3, 1, 2]) == [6, 1, 2]
        assert run_cells(math.factorial, [3, 1, 2], workers=2) == [6, 1, 2]


class TestExponentService:
    """Tests for ExponentService."""

    def test_row_d3(self):
        """Test the table row for d = 3."""
        row = ExponentService.exponent_row(3)
        assert row.stein_tomas == "4/3"
        assert row.conjectured["d3mod4_neg_nonsq"] == "3/2"
        assert row.conjectured["d3mod4_neg_sq"] == "4/3"
        assert row.conjectured["even"] == "n/a"
        assert row.affine_k["d3mod4_neg_sq"] == "1"
        assert row.consistent

    def test_row_d4(self):
        """Test the table row for d = 4."""
        row = ExponentService.exponent_row(4)
        assert row.stein_tomas == "10/7"
        assert row.conjectured["even"] == "3/2"
        assert row.necessary["even"] == "3/2"

    def test_row_d5(self):
        """Test the table row for d = 5."""
        row = ExponentService.exponent_row(5)
        assert row.conjectured["d1mod4_nonsq"] == "8/5"
        assert row.conjectured["d1mod4_sq"] == "3/2"

    @pytest.mark.parametrize("d", range(2, 13))
    def test_consistent(self, d):
        """Test that affine thresholds equal the conjectured exponents for every case."""
        assert ExponentService.exponent_row(d).consistent

    def test_d_below_two(self):
        """Test that d = 1 is rejected."""
        with pytest.raises(ValueError):
            ExponentService.exponent_row(1)

    def test_report_is_sorted(self):
        """Test that rows come out sorted and deduplicated."""
        report = ExponentService.build_report(RunConfig(subcommand="exponents", ds=[5, 3, 5]))
        assert [row.d for row in report.rows] == [3, 5]


class TestVerificationService:
    """Tests for VerificationService."""

    def test_small_run_passes(self):
        """Test that every check passes at q = 3, d = 2."""
        config = RunConfig(subcommand="verify", qs=[3], ds=[2], trials=3)
        report = VerificationService.run(config)
        failed = [(r.check, r.params, r.error) for r in report.results if not r.passed]
        assert failed == []
        assert report.all_passed
        checks = set(report.summary.by_check)
        assert {
            "gauss_modulus",
            "plancherel",
            "dyadic_mass",
            "s_hat_closed_form",
            "s_lp_identity",
            "hom_fourier_closed_form",
            "affine_maximality",
            "transfer_identity",
            "omega_bound",
            "omega_plancherel",
            "extremizer_ratio",
            "operator_norm_p2",
            "necessary_threshold",
        } <= checks
        assert report.wall_time is None

    def test_budget_is_checked_first(self):
        """Test that q=3, d=9 exceeds the pair budget before any work."""
        config = RunConfig(subcommand="verify", qs=[3], ds=[9])
        with pytest.raises(BudgetExceeded) as exc_info:
            VerificationService.run(config)
        assert exc_info.value.cap_name == "max_pair_evaluations"

    def test_budget_admits_q7_d5(self):
        """Test that q=7, d=5 fits both caps: 7^6 ambient points and 7^10 pairs."""
        VerificationService.check_budget(RunConfig(subcommand="verify", qs=[7], ds=[5]))

    def test_pair_budget_counts_q_to_the_2d(self):
        """Test that the pair count refused for q=3, d=9 is 3^18."""
        with pytest.raises(BudgetExceeded) as exc_info:
            VerificationService.check_budget(RunConfig(subcommand="verify", qs=[3], ds=[9]))
        assert exc_info.value.required == 3 ** 18

    def test_raised_check_becomes_failed_row(self):
        """Test that an error inside a check is recorded instead of aborting the run."""
        config = RunConfig(subcommand="verify", qs=[3], ds=[2], trials=2)
        with patch(
            "services.verification_service.build_affine_in_sphere",
            side_effect=SearchFailed("no isotropic vector"),
        ):
            results = VerificationService.variety_suite(3, 2, 1, config)
        affine_rows = [r for r in results if r.check == "affine_dimension"]
        assert len(affine_rows) == 1
        assert not affine_rows[0].passed
        assert affine_rows[0].error == "SearchFailed: no isotropic vector"

    def test_unexpected_error_becomes_failed_row(self):
        """Test that non-domain errors are also recorded."""
        config = RunConfig(subcommand="verify", qs=[3], ds=[2], trials=2)
        with patch("services.verification_service.plancherel_error", side_effect=RuntimeError("boom")):
            results = VerificationService.grid_suite(3, 2, config)
        plancherel_rows = [r for r in results if r.check == "plancherel"]
        assert plancherel_rows[0].error == "RuntimeError: boom"

    def test_exponent_suite(self):
        """Test that the exponent rows all pass and cover the requested d plus 3..12."""
        results = VerificationService.exponent_suite([2])
        assert all(r.passed for r in results)
        assert {r.params["d"] for r in results} == set(range(2, 13))

    def test_summary_counts(self):
        """Test per-check pass and fail counts."""
        results = [
            CheckResult(check="a", lhs=0, rhs=0, tol=0, passed=True),
            CheckResult(check="a", lhs=1, rhs=0, tol=0, passed=False),
            CheckResult(check="b", lhs=0, rhs=0, tol=0, passed=True),
        ]
        summary = Summary.from_results(results)
        assert (summary.total, summary.passed, summary.failed) == (3, 2, 1)
        assert summary.by_check["a"].failed == 1


class TestSweepService:
    """Tests for SweepService."""

    def _config(self, **overrides) -> RunConfig:
        values = dict(subcommand="sweep", qs=[3], ds=[2], p="4/3", search_class=SearchClass.HOMOGENEOUS, trials=5)
        values.update(overrides)
        return RunConfig(**values)

    def test_cells_sorted(self):
        """Test that cells are ordered by (d, q, j)."""
        cells = SweepService.cells(self._config(qs=[5, 3], ds=[3, 2]))
        keys = [(c.d, c.q, c.j) for c in cells]
        assert keys == sorted(keys)
        assert len(keys) == 2 * (2 + 4)

    def test_exhaustive_rows(self):
        """Test that the homogeneous class is exhaustive at q = 3, d = 2."""
        report = SweepService.run(self._config())
        assert [row.j for row in report.rows] == [1, 2]
        assert all(row.exhaustive and row.lower_bound_only for row in report.rows)
        assert all(row.evaluations == 64 for row in report.rows)
        assert report.rows[0].p == "4/3"

    def test_auto_exponent(self):
        """Test that p = auto resolves to the conjectured exponent of the cell."""
        report = SweepService.run(self._config(p="auto"))
        assert {row.p for row in report.rows} == {"4/3"}

    def test_deterministic(self):
        """Test that two runs give byte-identical reports."""
        config = self._config(search_class=SearchClass.ALL)
        first = ReportWriter.to_json(SweepService.run(config))
        second = ReportWriter.to_json(SweepService.run(config))
        assert first == second

    def test_budget(self):
        """Test that a grid over the ambient cap is refused."""
        with pytest.raises(BudgetExceeded):
            SweepService.cells(self._config(budget={"max_ambient_points": 5}))

    def test_conjectured_exponent_ratio_is_stable_in_q(self):
        """Test that at d = 5, nonsquare j and p = 8/5 the homogeneous sweep ratio varies by at most 4 over q = 3, 7, 11."""
        ratios = []
        for q in (3, 7, 11):
            j = first_j_for_case(make_field(q), 5, CaseKind.D1MOD4_NONSQ)
            config = self._config(qs=[q], ds=[5], p="8/5", trials=20, budget={"max_evaluations": 300})
            row = SweepService.run_cell(SweepCell(d=5, q=q, j=j), config)
            assert row.case == CaseKind.D1MOD4_NONSQ.value
            assert not row.exhaustive
            ratios.append(row.max_ratio)
        assert min(ratios) > 0
        assert max(ratios) / min(ratios) <= 4.0


class TestSubspaceService:
    """Tests for SubspaceService."""

    def test_rows_pass(self):
        """Test that every row is certified at the expected dimension with brute-force confirmation."""
        config = RunConfig(subcommand="subspace", qs=[3, 5], ds=[2, 3], brute_force=True)
        report = SubspaceService.run(config)
        assert len(report.rows) == 2 * (2 + 4)
        assert all(row.passed for row in report.rows)
        assert all(row.brute_force_k == row.k for row in report.rows)

    def test_failure_is_recorded(self):
        """Test that a search failure lands in the error field."""
        with patch("services.subspace_service.build_affine_in_sphere", side_effect=SearchFailed("retries")):
            row = SubspaceService.build_row(5, 3, 1, seed=0)
        assert row.error == "SearchFailed: retries"
        assert not row.passed

    def test_row_pass_rules(self):
        """Test that a brute-force mismatch fails the row."""
        row = SubspaceRow(q=3, d=3, j=2, case="x", k=1, expected_k=1, base=[], directions=[], certified=True, brute_force_k=2)
        assert not row.passed

    def test_d_below_two(self):
        """Test that d = 1 is rejected."""
        with pytest.raises(ValueError):
            SubspaceService.run(RunConfig(subcommand="subspace", qs=[3], ds=[1], p="2"))


class TestReportWriter:
    """Tests for ReportWriter."""

    def _report(self):
        return ExponentService.build_report(RunConfig(subcommand="exponents", ds=[3, 4]))

    def test_json_uses_pass_alias(self):
        """Test that check rows serialize `passed` as `pass`."""
        result = CheckResult(check="a", lhs=0.1, rhs=0.1, tol=0.0, passed=True)
        dumped = json.loads(result.model_dump_json(by_alias=True))
        assert dumped["pass"] is True
        assert "passed" not in dumped

    def test_csv_flattens_nested_columns(self):
        """Test that nested dicts become dotted columns."""
        rows = list(csv.reader(io.StringIO(ReportWriter.to_csv(self._report()))))
        header = rows[0]
        assert "conjectured.even" in header
        assert "necessary.d3mod4_neg_sq" in header
        assert len(rows) == 3
        assert rows[1][header.index("consistent")] == "true"

    def test_float_precision(self):
        """Test that floats keep 17 significant digits."""
        result = CheckResult(check="a", lhs=0.1, rhs=1 / 3, tol=0.0, passed=True)
        text = ReportWriter.to_csv(VerifyReport(config={}, results=[result], summary=Summary.from_results([result])))
        assert "0.10000000000000001" in text
        assert "0.33333333333333331" in text

    def test_write_to_file(self, tmp_path):
        """Test writing JSON to a path."""
        path = tmp_path / "report.json"
        ReportWriter.write(self._report(), OutputFormat.JSON, str(path))
        data = json.loads(path.read_text(encoding="utf-8"))
        assert [row["d"] for row in data["rows"]] == [3, 4]

    def test_write_to_stdout(self, capsys):
        """Test writing CSV to stdout."""
        ReportWriter.write(self._report(), OutputFormat.CSV)
        assert capsys.readouterr().out.startswith("d,stein_tomas")

    def test_unsupported_report(self):
        """Test that foreign models are rejected."""
        with pytest.raises(TypeError):
            ReportWriter.rows(Summary(total=0, passed=0, failed=0))
