from typing import Callable, Dict, List, Optional

from ..algebra.mollifier import Kernel, build_kernel
from ..checks import CHECK_CLASSES, BaseCheck, CompositeCheck, EmbeddingCheck
from ..core.config import EgorovConfig
from ..core.models import CheckResult, RunReport, RunSummary
from ..utils.logger import LoggerFactory
from ..utils.scenario_loader import Scenario
from ..utils.serialization import load_kernel

logger = LoggerFactory.create_logger(__name__)


def kernel_for(config: EgorovConfig, kernel_file=None) -> Kernel:
    """Load the kernel artifact when one is named, otherwise build it from ``config.kernel``."""
    if kernel_file is not None:
        kernel = load_kernel(kernel_file)
        logger.info(f"Loaded kernel m={kernel.m} from {kernel_file}")
        return kernel
    settings = config.kernel
    return build_kernel(
        m=settings.m,
        quad_resolution=settings.quad_resolution,
        table_size=settings.table_size,
        max_m=settings.max_m,
        max_condition=settings.max_condition,
    )


class ScenarioRunner:

    def __init__(self, scenario: Scenario, kernel: Optional[Kernel] = None):
        self.scenario = scenario
        self.config = scenario.config
        self.kernel = kernel or kernel_for(self.config, scenario.kernel_file)
        self.check_factory_map = self._create_check_factory_map()

    def _create_check_factory_map(self) -> Dict[str, Callable[[], BaseCheck]]:
        config, kernel, domain = self.config, self.kernel, self.scenario.domain
        factory_map: Dict[str, Callable[[], BaseCheck]] = {
            name: (lambda check_class=check_class: check_class(config, kernel, domain))
            for name, check_class in CHECK_CLASSES.items()
        }
        factory_map["embedding"] = lambda: EmbeddingCheck(
            config, kernel, domain, distributions=self.scenario.distributions
        )
        return factory_map

    def build_checks(self) -> List[BaseCheck]:
        return [self.check_factory_map[name]() for name in self.scenario.checks]

    def run(self) -> RunReport:
        composite = CompositeCheck(self.build_checks(), threads=self.config.run.threads)
        results = composite.run()
        return RunReport(
            scenario=self.scenario.name,
            summary=self._create_run_summary(results),
            results=results,
            settings=self._settings(),
        )

    @staticmethod
    def _create_run_summary(results: List[CheckResult]) -> RunSummary:
        passed_count = sum(1 for result in results if result.passed)
        return RunSummary(
            total_checks=len(results),
            passed_checks=passed_count,
            failed_checks=len(results) - passed_count,
        )

    def _settings(self) -> dict:
        return {
            "checks": list(self.scenario.checks),
            "kernel": {"m": self.kernel.m, "q": self.kernel.q},
            "rho_grid": self.config.grid.rho_grid(),
            "seed": self.config.sampling.seed,
            "tolerances": {
                "monad": self.config.tolerances.monad,
                "association": self.config.tolerances.association,
            },
            "domain": self.scenario.domain.to_dict() if self.scenario.domain else None,
        }
