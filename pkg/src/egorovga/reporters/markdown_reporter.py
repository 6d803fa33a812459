from pathlib import Path

from .base import BaseReporter, clause_results
from ..core.exceptions import ReportingError
from ..utils.logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)


class MarkdownReporter(BaseReporter):
    """Human-readable summary with one line per clause"""

    def __init__(self, output_path):
        self.output_path = Path(output_path)

    def report_single(self, result):
        self._write(self._render(result.check_name, clause_results([result]), None))

    def report_batch(self, report):
        self._write(self._render(report.scenario, clause_results(report.results), report.summary))

    @staticmethod
    def _render(title, clauses, summary) -> str:
        lines = [f"# {title}", ""]
        lines.extend(f"- {result.summary_line()}" for result in clauses)
        if summary is not None:
            status = "PASS" if summary.all_passed else "FAIL"
            lines.extend(["", f"{summary.passed_checks}/{summary.total_checks} checks passed: {status}"])
        return "\n".join(lines) + "\n"

    def _write(self, text: str):
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            self.output_path.write_text(text)
        except OSError as error:
            raise ReportingError(f"Cannot write {self.output_path}: {error}") from error
        logger.info(f"Wrote {self.output_path}")
