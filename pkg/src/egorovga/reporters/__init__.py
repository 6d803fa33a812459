from .artifacts import artifact_reporters, write_artifacts
from .base import BaseReporter, clause_results
from .console_reporter import ConsoleReporter
from .csv_reporter import CSVReporter
from .json_reporter import JSONReporter
from .markdown_reporter import MarkdownReporter

__all__ = [
    "BaseReporter",
    "ConsoleReporter",
    "CSVReporter",
    "JSONReporter",
    "MarkdownReporter",
    "artifact_reporters",
    "clause_results",
    "write_artifacts",
]
