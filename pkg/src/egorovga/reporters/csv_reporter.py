import csv
from pathlib import Path

from .base import BaseReporter
from ..core.exceptions import ReportingError
from ..utils.logger import LoggerFactory
from ..utils.serialization import format_float

logger = LoggerFactory.create_logger(__name__)

SWEEP_COLUMNS = ["case", "phi_id", "rho", "value_re", "value_im"]


class CSVReporter(BaseReporter):
    """Writes the raw pairing sweeps, one row per (case, phi, rho)"""

    def __init__(self, output_path, digits: int = 17):
        self.output_path = Path(output_path)
        self.digits = digits

    def report_single(self, result):
        rows = list(result.sweeps)
        for child in result.children:
            rows.extend(child.sweeps)
        self._write(rows)

    def report_batch(self, report):
        self._write(report.all_sweeps())

    def _write(self, rows):
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            with self.output_path.open("w", newline="") as file:
                writer = csv.writer(file, lineterminator="\n")
                writer.writerow(SWEEP_COLUMNS)
                for row in rows:
                    value = complex(row.value)
                    writer.writerow(
                        [
                            row.case,
                            row.phi_id,
                            format_float(row.rho, self.digits),
                            format_float(value.real, self.digits),
                            format_float(value.imag, self.digits),
                        ]
                    )
        except OSError as error:
            raise ReportingError(f"Cannot write {self.output_path}: {error}") from error
        logger.info(f"Wrote {len(rows)} sweep rows to {self.output_path}")
