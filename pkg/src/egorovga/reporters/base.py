from abc import ABC, abstractmethod
from typing import List

from ..core.models import CheckResult, RunReport


class BaseReporter(ABC):
    @abstractmethod
    def report_single(self, result: CheckResult):
        pass

    @abstractmethod
    def report_batch(self, report: RunReport):
        pass


def clause_results(results: List[CheckResult]) -> List[CheckResult]:
    """One entry per clause: the children of aggregated checks, or the check itself."""
    flattened = []
    for result in results:
        if result.children:
            flattened.extend(clause_results(result.children))
        else:
            flattened.append(result)
    return flattened
