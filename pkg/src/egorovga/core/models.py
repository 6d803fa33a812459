from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class SweepRow:
    case: str
    phi_id: str
    rho: float
    value: complex


@dataclass
class CheckResult:
    check_name: str
    clause: str
    passed: bool
    max_error: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)
    issues: List[str] = field(default_factory=list)
    expected_outcome: Optional[str] = None
    sweeps: List[SweepRow] = field(default_factory=list)
    fits: Dict[str, Any] = field(default_factory=dict)
    children: List["CheckResult"] = field(default_factory=list)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.clause}: {status}"
        if self.expected_outcome:
            line += f" ({self.expected_outcome})"
        if self.max_error is not None:
            line += f" max_err={self.max_error:.1e}"
        return line


@dataclass
class RunSummary:
    total_checks: int
    passed_checks: int
    failed_checks: int

    @property
    def all_passed(self) -> bool:
        return self.failed_checks == 0


@dataclass
class RunReport:
    scenario: str
    summary: RunSummary
    results: List[CheckResult] = field(default_factory=list)
    settings: Dict[str, Any] = field(default_factory=dict)

    def add_result(self, result: CheckResult):
        self.results.append(result)

    def all_sweeps(self) -> List[SweepRow]:
        rows = []
        for result in self.results:
            rows.extend(result.sweeps)
            for child in result.children:
                rows.extend(child.sweeps)
        return rows
