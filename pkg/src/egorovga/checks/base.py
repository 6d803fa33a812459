from abc import ABC, abstractmethod
from typing import Iterable, List, Optional, Sequence

from ..algebra.domain import Domain, NearStandardPoint, sample_near_standard
from ..algebra.genfun import EvalContext
from ..algebra.mollifier import Kernel
from ..algebra.weak import AsymptoticFit, TestFunction, default_suite
from ..core.config import EgorovConfig
from ..core.models import CheckResult, SweepRow


class BaseCheck(ABC):
    """A named verification of one claim about the algebra, reported under ``clause``."""

    clause = "check"

    def __init__(self, name: str, config: EgorovConfig, kernel: Kernel, domain: Optional[Domain] = None):
        self.name = name
        self.config = config
        self.kernel = kernel
        self.domain = domain or Domain.interval(-2.0, 2.0)

    @abstractmethod
    def run(self) -> CheckResult:
        pass

    # shared settings

    def _rho_grid(self) -> List[float]:
        return self.config.grid.rho_grid()

    def _context(self, rho: float) -> EvalContext:
        return EvalContext.from_config(self.config, rho)

    def _points(self, dom: Domain, anchors: Iterable[Sequence[float]] = ()) -> List[NearStandardPoint]:
        sampling = self.config.sampling
        return sample_near_standard(
            dom,
            sampling.n_base,
            sampling.offset_exponents,
            seed=sampling.seed,
            margin_fraction=sampling.margin_fraction,
            window=sampling.window,
            anchors=anchors,
        )

    def _suite(self, dom: Domain, origin: Optional[Sequence[float]] = None) -> List[TestFunction]:
        return default_suite(dom.dim, dom, margin=max(self._rho_grid()), origin=origin)

    def _pairing_options(self) -> dict:
        return {
            "nodes": self.config.quadrature.pairing_nodes,
            "panels": self.config.quadrature.pairing_panels,
            "nodes_per_axis": self.config.quadrature.nodes_per_axis,
            "residual_tol": self.config.tolerances.fit_residual,
            "floor": self.config.tolerances.fit_floor,
            "q": self.kernel.q,
        }

    def _comparison_options(self) -> dict:
        return {
            "nodes_per_axis": self.config.quadrature.nodes_per_axis,
            "local_substitution": self.config.quadrature.local_substitution,
            "rho_max": self.config.grid.rho_max,
        }

    @staticmethod
    def _sweep_rows(case: str, phi_id: str, fit: AsymptoticFit) -> List[SweepRow]:
        return [SweepRow(case, phi_id, rho, value) for rho, value in fit.samples]

    # results

    def _create_result(
        self,
        passed: bool,
        max_error: Optional[float] = None,
        details: Optional[dict] = None,
        issues: Optional[list] = None,
        expected_outcome: Optional[str] = None,
        clause: Optional[str] = None,
        children: Optional[List[CheckResult]] = None,
        sweeps: Optional[List[SweepRow]] = None,
        fits: Optional[dict] = None,
    ) -> CheckResult:
        return CheckResult(
            check_name=self.name,
            clause=clause or self.clause,
            passed=passed,
            max_error=max_error,
            details=details or {},
            issues=issues or [],
            expected_outcome=expected_outcome,
            sweeps=sweeps or [],
            fits=fits or {},
            children=children or [],
        )

    def _aggregate(self, children: List[CheckResult]) -> CheckResult:
        errors = [child.max_error for child in children if child.max_error is not None]
        issues = [issue for child in children for issue in child.issues]
        return self._create_result(
            passed=all(child.passed for child in children),
            max_error=max(errors) if errors else None,
            issues=issues,
            children=children,
        )

    def _create_error_result(self, error: Exception, error_type: str = "check_error") -> CheckResult:
        return self._create_result(
            passed=False,
            details={"error_type": error_type, "error_message": str(error)},
            issues=[f"{self.name} check failed: {error}"],
        )
