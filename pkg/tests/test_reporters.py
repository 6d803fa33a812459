import csv
import json
from io import StringIO

import pytest
from rich.console import Console

from src.egorovga.core.exceptions import ReportingError
from src.egorovga.core.models import CheckResult, RunReport, RunSummary, SweepRow
from src.egorovga.reporters import (
    ConsoleReporter,
    CSVReporter,
    JSONReporter,
    MarkdownReporter,
    clause_results,
    write_artifacts,
)


@pytest.fixture
def run_report():
    child_pass = CheckResult(
        check_name="embedding",
        clause="embedding/pairing-fidelity",
        passed=True,
        max_error=3e-11,
        sweeps=[SweepRow("iota(delta)", "phi00", 2.0**-8, 0.1 + 0j), SweepRow("iota(delta)", "phi00", 2.0**-9, 0.2 - 1j)],
        fits={"iota(delta)/phi00": {"residual": 1e-14}},
    )
    child_fail = CheckResult(
        check_name="embedding",
        clause="embedding/error-order",
        passed=False,
        max_error=0.5,
        issues=["slope 4.1 below 5.5"],
    )
    parent = CheckResult("embedding", "embedding", False, 0.5, children=[child_pass, child_fail])
    regular = CheckResult(
        "regular", "regular/delta-hat", True, expected_outcome="refuted (expected)", details={"verdict": "refuted"}
    )
    return RunReport(
        scenario="desk",
        summary=RunSummary(total_checks=2, passed_checks=1, failed_checks=1),
        results=[parent, regular],
        settings={"seed": 7},
    )


class TestClauseResults:
    def test_children_replace_parents(self, run_report):
        """Given an aggregated check, When flattened, Then its children are listed in place of it."""
        clauses = [result.clause for result in clause_results(run_report.results)]
        assert clauses == ["embedding/pairing-fidelity", "embedding/error-order", "regular/delta-hat"]


class TestCSVReporter:
    def test_sweeps_are_written(self, run_report, tmp_path):
        """Given a report with sweeps, When written, Then each row has five columns at full precision."""
        path = tmp_path / "sweeps.csv"
        CSVReporter(path).report_batch(run_report)
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["case", "phi_id", "rho", "value_re", "value_im"]
        assert rows[1] == ["iota(delta)", "phi00", "0.00390625", "0.10000000000000001", "0"]
        assert rows[2][4] == "-1"
        assert len(rows) == 3


class TestJSONReporter:
    def test_verdicts(self, run_report, tmp_path):
        """Given a report, When verdicts are written, Then each clause carries its pass flag."""
        path = tmp_path / "verdicts.json"
        JSONReporter(path).report_batch(run_report)
        data = json.loads(path.read_text())
        assert data["summary"]["failed_checks"] == 1
        assert data["clauses"]["embedding/error-order"]["passed"] is False
        assert data["clauses"]["regular/delta-hat"]["expected_outcome"] == "refuted (expected)"

    def test_fits_only_list_fitted_clauses(self, run_report, tmp_path):
        """Given a report, When fits are written, Then only clauses with fits appear."""
        path = tmp_path / "fits.json"
        JSONReporter(path, content="fits").report_batch(run_report)
        assert list(json.loads(path.read_text())) == ["embedding/pairing-fidelity"]

    def test_output_is_deterministic(self, run_report, tmp_path):
        """Given the same report twice, When written, Then the bytes are identical."""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        JSONReporter(first).report_batch(run_report)
        JSONReporter(second).report_batch(run_report)
        assert first.read_bytes() == second.read_bytes()

    def test_unknown_content_is_rejected(self, tmp_path):
        """Given an unknown content kind, When a reporter is built, Then ReportingError is raised."""
        with pytest.raises(ReportingError):
            JSONReporter(tmp_path / "x.json", content="plots")


class TestMarkdownReporter:
    def test_one_line_per_clause(self, run_report, tmp_path):
        """Given a report, When the summary is written, Then every clause has a status line."""
        path = tmp_path / "summary.md"
        MarkdownReporter(path).report_batch(run_report)
        text = path.read_text()
        assert "- embedding/pairing-fidelity: PASS max_err=3.0e-11" in text
        assert "- embedding/error-order: FAIL max_err=5.0e-01" in text
        assert "- regular/delta-hat: PASS (refuted (expected))" in text
        assert "1/2 checks passed: FAIL" in text


class TestConsoleReporter:
    def test_batch_output(self, run_report):
        """Given a report, When printed, Then clauses and the issue list appear."""
        buffer = StringIO()
        ConsoleReporter(console=Console(file=buffer, width=200)).report_batch(run_report)
        output = buffer.getvalue()
        assert "embedding/error-order" in output
        assert "slope 4.1 below 5.5" in output
        assert "1 of 2 checks passed" in output


class TestArtifacts:
    def test_all_files_are_written(self, run_report, tmp_path):
        """Given a report, When artifacts are written, Then the four files exist."""
        write_artifacts(run_report, tmp_path / "out")
        assert sorted(p.name for p in (tmp_path / "out").iterdir()) == [
            "fits.json",
            "summary.md",
            "sweeps.csv",
            "verdicts.json",
        ]
