from typing import Dict, List

from .base import BaseCheck
from ..algebra.dist import DensityClass, iota_embed, named_distribution, schwartz_embed
from ..algebra.domain import Domain
from ..algebra.functions import Polynomial, catalogue_function
from ..algebra.genfun import GenFunc, compare_on_monad, compose, delta_hat, sigma_embed
from ..algebra.regular import RegularityReport, RegularityVerdict, certify_member, refute_member
from ..algebra.scalars import AsymptoticScalar
from ..core.models import CheckResult

PROBE_GRID = (2.0**-2, 2.0**-3, 2.0**-4)
PROBE_WINDOW = Domain.interval(-0.8, 0.8)
PROBE_TOLERANCE = 1e-12


class RegularCheck(BaseCheck):
    """Certification and refutation of membership in the regular subalgebra.

    Polynomial embeddings are the only catalogue entries that avoid refutation and match
    a certified member on the monad; point masses and the jump are refuted, and the
    embedded sine is neither refuted nor equal to its certified counterpart.
    """

    clause = "regular"

    def __init__(self, config, kernel, domain=None):
        super().__init__("regular", config, kernel, domain or Domain.real_space(1))

    def run(self):
        children = [
            self._expect("regular/delta-hat", delta_hat(self.kernel, self.domain), RegularityVerdict.REFUTED),
            self._expect(
                "regular/exp-delta",
                compose(catalogue_function("exp"), delta_hat(self.kernel, self.domain)),
                RegularityVerdict.REFUTED,
            ),
            self._expect("regular/generated-member", self._generated_member(), RegularityVerdict.CERTIFIED_MEMBER),
            self._expect(
                "regular/sigma-sin",
                sigma_embed(catalogue_function("sin"), self.domain),
                RegularityVerdict.CERTIFIED_MEMBER,
            ),
        ]
        children.extend(self._catalogue())
        return self._aggregate(children)

    def _generated_member(self) -> GenFunc:
        """rho^-3 sigma(sin) + sigma(x^2)."""
        scale = AsymptoticScalar.monomial(-3)
        return sigma_embed(catalogue_function("sin"), self.domain) * scale + sigma_embed(
            Polynomial.monomial(2), self.domain
        )

    def _classify(self, f: GenFunc) -> RegularityReport:
        certified = certify_member(f)
        if certified.verdict is RegularityVerdict.CERTIFIED_MEMBER:
            return certified
        regularity = self.config.regularity
        return refute_member(
            f,
            regularity.alpha_max,
            self._points(self.domain, anchors=f.landmarks()),
            regularity.rho_grid(),
            regularity.slope_threshold,
            self.config.quadrature.nodes_per_axis,
            self.config.grid.rho_max,
        )

    def _expect(self, clause: str, f: GenFunc, expected: RegularityVerdict, extra: Dict = None) -> CheckResult:
        report = self._classify(f)
        passed = report.verdict is expected
        details = {"verdict": report.verdict.value, "expected": expected.value, "report": report.to_dict()}
        details.update(extra or {})
        return self._create_result(
            passed=passed,
            details=details,
            issues=[] if passed else [f"{clause}: {report.verdict.value}, expected {expected.value}"],
            expected_outcome=f"{expected.value} (expected)",
            clause=clause,
        )

    def _catalogue(self) -> List[CheckResult]:
        results = []
        for name in ("delta", "d_delta", "heaviside"):
            embedded = iota_embed(named_distribution(name, self.domain), self.kernel)
            results.append(self._expect(f"regular/catalogue-{name}", embedded, RegularityVerdict.REFUTED))
        for name, function, density_class, expect_equal in (
            ("sin", catalogue_function("sin"), DensityClass.SMOOTH, False),
            ("polynomial", Polynomial.univariate([1, -2, 0, 1]), DensityClass.POLYNOMIAL, True),
        ):
            embedded = iota_embed(schwartz_embed(function, density_class, self.domain), self.kernel)
            counterpart = sigma_embed(function, self.domain)
            comparison = compare_on_monad(
                embedded,
                counterpart,
                self._points(PROBE_WINDOW),
                PROBE_GRID,
                PROBE_TOLERANCE,
                **self._comparison_options(),
            )
            counterpart_verdict = certify_member(counterpart).verdict
            result = self._expect(
                f"regular/catalogue-{name}",
                embedded,
                RegularityVerdict.INCONCLUSIVE,
                extra={
                    "equal_to_certified_counterpart": comparison.passed,
                    "counterpart_verdict": counterpart_verdict.value,
                    "probe_error": comparison.max_scaled_error,
                },
            )
            if comparison.passed is not expect_equal or counterpart_verdict is not RegularityVerdict.CERTIFIED_MEMBER:
                result.passed = False
                result.issues.append(
                    f"{name}: equality with sigma({name}) is {comparison.passed}, expected {expect_equal}"
                )
            result.expected_outcome = "member (expected)" if expect_equal else "inconclusive, not certified (expected)"
            results.append(result)
        return results
