from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from .base import BaseCheck
from ..core.models import CheckResult
from ..utils.logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)


class CompositeCheck:
    """Runs several checks, in parallel when ``threads > 1``, keeping their order"""

    def __init__(self, checks: List[BaseCheck], threads: int = 1):
        self.checks = checks
        self.threads = max(1, threads)

    def run(self) -> List[CheckResult]:
        if self.threads == 1 or len(self.checks) < 2:
            return [self._run_one(check) for check in self.checks]
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(self._run_one, self.checks))

    @staticmethod
    def _run_one(check: BaseCheck) -> CheckResult:
        logger.info(f"Running check '{check.name}'")
        try:
            result = check.run()
        except Exception as error:
            logger.error(f"Check '{check.name}' raised {type(error).__name__}: {error}")
            return check._create_error_result(error, type(error).__name__)
        logger.info(f"Finished check '{check.name}': {'PASS' if result.passed else 'FAIL'}")
        return result

    def add_check(self, check: BaseCheck):
        self.checks.append(check)

    def remove_check(self, name: str):
        self.checks = [check for check in self.checks if check.name != name]

    def get_check(self, name: str) -> Optional[BaseCheck]:
        for check in self.checks:
            if check.name == name:
                return check
        return None
