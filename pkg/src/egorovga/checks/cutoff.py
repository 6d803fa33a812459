import numpy as np

from .base import BaseCheck
from ..algebra.dist import DensityClass, iota_embed, schwartz_embed
from ..algebra.domain import Domain
from ..algebra.functions import catalogue_function
from ..algebra.genfun import compare_on_monad, cutoff, sigma_embed

CUTOFF_TOLERANCE = 1e-12


def cutoff_domains():
    return {
        "(-2,2)": Domain.interval(-2.0, 2.0),
        "(-2,-1)u(0,3)": Domain.union(Domain.interval(-2.0, -1.0), Domain.interval(0.0, 3.0)),
        "(0,inf)": Domain.interval(0.0, float("inf")),
    }


class CutoffCheck(BaseCheck):
    """The cutoff is exactly one on the monad and the embedding vanishes near the boundary."""

    clause = "cutoff"

    def __init__(self, config, kernel, domain=None):
        super().__init__("cutoff", config, kernel, domain)

    def run(self):
        return self._aggregate([self._check_plateau(), self._check_boundary_layer()])

    def _check_plateau(self):
        sine = catalogue_function("sin")
        errors = {}
        issues = []
        for label, dom in cutoff_domains().items():
            smooth = sigma_embed(sine, dom)
            comparison = compare_on_monad(
                cutoff(self.kernel, dom) * smooth,
                smooth,
                self._points(dom),
                self._rho_grid(),
                CUTOFF_TOLERANCE,
                **self._comparison_options(),
            )
            errors[label] = comparison.max_scaled_error
            if not comparison.passed:
                issues.append(f"{label}: Pi*sigma(sin) differs from sigma(sin) by {comparison.max_scaled_error:.3e}")
        return self._create_result(
            passed=not issues,
            max_error=max(errors.values()),
            details={"errors": errors, "tolerance": CUTOFF_TOLERANCE},
            issues=issues,
            clause="cutoff/plateau",
        )

    def _check_boundary_layer(self):
        """Pi * (T * Delta_rho) is zero within 2 rho of the boundary."""
        dom = Domain.interval(-1.0, 1.0)
        embedded = iota_embed(schwartz_embed(catalogue_function("sin"), DensityClass.SMOOTH, dom), self.kernel)
        fractions = np.linspace(0.05, 1.95, 20)
        largest = 0.0
        for rho in self._rho_grid():
            layer = np.concatenate([1.0 - fractions * rho, -1.0 + fractions * rho])[:, None]
            largest = max(largest, float(np.max(np.abs(embedded.evaluate(layer, self._context(rho))))))
        return self._create_result(
            passed=largest == 0.0,
            max_error=largest,
            details={"layer_points": 2 * len(fractions)},
            issues=[] if largest == 0.0 else [f"embedding is {largest:.3e} inside the boundary layer"],
            clause="cutoff/boundary-layer",
        )
