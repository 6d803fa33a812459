from .base import BaseCheck
from ..algebra.dist import (
    change_of_variables_dist,
    iota_embed,
    named_distribution,
    pushforward_genfunc,
)
from ..algebra.domain import Domain
from ..algebra.maps import Diffeomorphism
from ..algebra.weak import Verdict, association_report

PUSHFORWARD_TOLERANCE = 1e-6


class PushforwardCheck(BaseCheck):
    """theta_*(iota_X(T)) is associated with iota_Y(T(theta)) for the affine map x -> 2x + 1.

    The convention is <T(theta), phi> = <T, (phi o theta) |det D theta|>.
    """

    clause = "pushforward/change-of-variables"

    def __init__(self, config, kernel, domain=None, cases=("delta", "sin")):
        super().__init__("pushforward", config, kernel, domain)
        self.cases = tuple(cases)
        self.theta = Diffeomorphism.affine([[2.0]], [1.0], name="2x+1")

    def run(self):
        source = Domain.interval(-2.0, 2.0)
        target = self.theta.map_domain(source)
        suite = self._suite(target, origin=self.theta.map_point([0.0]))
        children = []
        for case in self.cases:
            T = named_distribution(case, source)
            pushed = pushforward_genfunc(iota_embed(T, self.kernel), self.theta, target)
            transported = iota_embed(change_of_variables_dist(T, self.theta, target), self.kernel)
            report = association_report(
                pushed, transported, suite, self._rho_grid(), PUSHFORWARD_TOLERANCE, **self._pairing_options()
            )
            passed = report.verdict is Verdict.TRUE
            sweeps = []
            for phi_id, fit in sorted(report.fits.items()):
                sweeps.extend(self._sweep_rows(f"theta_*iota({case})-iota({case}(theta))", phi_id, fit))
            children.append(
                self._create_result(
                    passed=passed,
                    max_error=report.max_error,
                    details={"case": case, "verdict": report.verdict.value, "map": self.theta.to_dict(), "test_functions": len(suite)},
                    issues=[] if passed else [f"{case}: verdict {report.verdict.value}"],
                    sweeps=sweeps,
                    fits={f"{case}/{phi_id}": fit.to_dict() for phi_id, fit in report.fits.items()},
                )
            )
        return self._aggregate(children)
