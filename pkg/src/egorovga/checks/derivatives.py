from .base import BaseCheck
from ..algebra.dist import DensityClass, distr_derive, iota_embed, named_distribution, schwartz_embed
from ..algebra.functions import catalogue_function
from ..algebra.genfun import compare_on_monad, sigma_embed

DERIVATIVE_TOLERANCE = 1e-8


class DerivativeCheck(BaseCheck):
    """iota commutes with derivatives, and derivatives of iota(S(f)) extend those of a smooth f."""

    clause = "derivatives"

    def __init__(self, config, kernel, domain=None, cases=("delta", "sin", "heaviside"), max_order: int = 2):
        super().__init__("derivatives", config, kernel, domain)
        self.cases = tuple(cases)
        self.max_order = max_order

    def run(self):
        return self._aggregate([self._check_commutation(), self._check_standard_extension()])

    def _orders(self):
        return [(order,) + (0,) * (self.domain.dim - 1) for order in range(1, self.max_order + 1)]

    def _check_commutation(self):
        points = self._points(self.domain, anchors=[(0.0,) * self.domain.dim])
        max_error = 0.0
        issues = []
        for case in self.cases:
            T = named_distribution(case, self.domain)
            embedded = iota_embed(T, self.kernel)
            for alpha in self._orders():
                comparison = compare_on_monad(
                    embedded.derive(alpha),
                    iota_embed(distr_derive(T, alpha), self.kernel),
                    points,
                    self._rho_grid(),
                    DERIVATIVE_TOLERANCE,
                    **self._comparison_options(),
                )
                max_error = max(max_error, comparison.max_scaled_error)
                if not comparison.passed:
                    issues.append(f"{case}, alpha={alpha}: scaled error {comparison.max_scaled_error:.3e}")
        return self._create_result(
            passed=not issues,
            max_error=max_error,
            details={"cases": list(self.cases), "max_order": self.max_order, "tolerance": DERIVATIVE_TOLERANCE},
            issues=issues,
            clause="derivatives/commute",
        )

    def _check_standard_extension(self):
        points = self._points(self.domain)
        max_error = 0.0
        issues = []
        for name in ("sin", "exp"):
            function = catalogue_function(name, self.domain.dim)
            embedded = iota_embed(schwartz_embed(function, DensityClass.SMOOTH, self.domain), self.kernel)
            for alpha in self._orders():
                comparison = compare_on_monad(
                    embedded.derive(alpha),
                    sigma_embed(function.derivative(alpha), self.domain),
                    points,
                    self._rho_grid(),
                    DERIVATIVE_TOLERANCE,
                    **self._comparison_options(),
                )
                max_error = max(max_error, comparison.max_scaled_error)
                if not comparison.passed:
                    issues.append(f"{name}, alpha={alpha}: scaled error {comparison.max_scaled_error:.3e}")
        return self._create_result(
            passed=not issues,
            max_error=max_error,
            details={"functions": ["sin", "exp"], "tolerance": DERIVATIVE_TOLERANCE},
            issues=issues,
            clause="derivatives/standard-extension",
        )
