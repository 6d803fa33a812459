from .base import BaseReporter, clause_results
from ..core.exceptions import ReportingError
from ..utils.serialization import write_json

CONTENTS = ("verdicts", "fits")


class JSONReporter(BaseReporter):
    """Writes either the clause verdicts or the asymptotic fits of a run"""

    def __init__(self, output_path, content: str = "verdicts"):
        if content not in CONTENTS:
            raise ReportingError(f"Unknown JSON content '{content}', expected one of {CONTENTS}")
        self.output_path = output_path
        self.content = content

    def report_single(self, result):
        write_json(self._serialize_clauses(clause_results([result])), self.output_path)

    def report_batch(self, report):
        clauses = clause_results(report.results)
        if self.content == "fits":
            write_json(self._serialize_clauses(clauses), self.output_path)
            return
        write_json(
            {
                "scenario": report.scenario,
                "settings": report.settings,
                "summary": {
                    "total_checks": report.summary.total_checks,
                    "passed_checks": report.summary.passed_checks,
                    "failed_checks": report.summary.failed_checks,
                    "all_passed": report.summary.all_passed,
                },
                "clauses": self._serialize_clauses(clauses),
            },
            self.output_path,
        )

    def _serialize_clauses(self, clauses) -> dict:
        if self.content == "fits":
            return {result.clause: result.fits for result in clauses if result.fits}
        return {result.clause: self._serialize_verdict(result) for result in clauses}

    @staticmethod
    def _serialize_verdict(result) -> dict:
        return {
            "check": result.check_name,
            "passed": result.passed,
            "max_error": result.max_error,
            "expected_outcome": result.expected_outcome,
            "issues": list(result.issues),
            "details": result.details,
        }
