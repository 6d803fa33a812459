from pathlib import Path
from typing import List

from .base import BaseReporter
from .csv_reporter import CSVReporter
from .json_reporter import JSONReporter
from .markdown_reporter import MarkdownReporter
from ..core.models import RunReport


def artifact_reporters(out_dir, digits: int = 17) -> List[BaseReporter]:
    out_dir = Path(out_dir)
    return [
        CSVReporter(out_dir / "sweeps.csv", digits=digits),
        JSONReporter(out_dir / "fits.json", content="fits"),
        JSONReporter(out_dir / "verdicts.json", content="verdicts"),
        MarkdownReporter(out_dir / "summary.md"),
    ]


def write_artifacts(report: RunReport, out_dir, digits: int = 17):
    """Writes sweeps.csv, fits.json, verdicts.json and summary.md one after another."""
    for reporter in artifact_reporters(out_dir, digits):
        reporter.report_batch(report)
