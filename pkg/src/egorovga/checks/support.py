from .base import BaseCheck
from ..algebra.dist import (
    DensityClass,
    dirac,
    iota_embed,
    restrict_distribution,
    schwartz_embed,
)
from ..algebra.domain import Domain
from ..algebra.functions import catalogue_function
from ..algebra.genfun import compare_on_monad, restrict, support_estimate

GRID_STEPS = (0.1, 0.05, 0.025)
POINT_MASS_LOCATION = 0.33


class SupportCheck(BaseCheck):
    """Regularisation keeps supports: point masses stay in one cell, flat regions stay empty."""

    clause = "support"

    def __init__(self, config, kernel, domain=None, steps=GRID_STEPS):
        super().__init__("support", config, kernel, domain)
        self.steps = tuple(steps)

    def run(self):
        return self._aggregate(
            [self._check_point_mass(), self._check_flat_region(), self._check_restriction()]
        )

    def _estimate(self, f, step):
        return support_estimate(
            f,
            step,
            self._rho_grid(),
            window=self.config.sampling.window,
            nodes_per_axis=self.config.quadrature.nodes_per_axis,
            rho_max=self.config.grid.rho_max,
        )

    def _check_point_mass(self):
        interval = Domain.interval(-1.0, 1.0)
        embedded = iota_embed(dirac(interval, (POINT_MASS_LOCATION,)), self.kernel)
        estimates = {}
        issues = []
        for step in self.steps:
            boxes = self._estimate(embedded, step)
            estimates[str(step)] = [list(box[0]) for box in boxes]
            single = len(boxes) == 1 and boxes[0][0][0] <= POINT_MASS_LOCATION <= boxes[0][0][1]
            if not single:
                issues.append(f"step {step}: support estimate {estimates[str(step)]}")
        return self._create_result(
            passed=not issues,
            details={"location": POINT_MASS_LOCATION, "estimates": estimates},
            issues=issues,
            clause="support/point-mass",
        )

    def _check_flat_region(self):
        """f = vanishing_core is zero on [-1/2, 1/2]; cells inside it must be left out."""
        interval = Domain.interval(-2.0, 2.0)
        f = catalogue_function("vanishing_core")
        embedded = iota_embed(schwartz_embed(f, DensityClass.CONTINUOUS, interval), self.kernel)
        estimates = {}
        issues = []
        for step in self.steps:
            boxes = self._estimate(embedded, step)
            estimates[str(step)] = len(boxes)
            inside = [box for box in boxes if box[0][0] >= -0.5 + step - 1e-12 and box[0][1] <= 0.5 - step + 1e-12]
            if inside or not boxes:
                issues.append(f"step {step}: {len(inside)} cells inside the flat region, {len(boxes)} cells in all")
        return self._create_result(
            passed=not issues,
            details={"cells": estimates},
            issues=issues,
            clause="support/flat-region",
        )

    def _check_restriction(self):
        """iota on a subdomain of the restricted distribution equals the restriction of iota."""
        outer = Domain.interval(-2.0, 2.0)
        inner = Domain.interval(0.0, 1.0)
        T = (
            dirac(outer, (0.5,))
            + dirac(outer, (-1.0,))
            + schwartz_embed(catalogue_function("sin"), DensityClass.SMOOTH, outer)
        )
        comparison = compare_on_monad(
            iota_embed(restrict_distribution(T, inner), self.kernel),
            restrict(iota_embed(T, self.kernel), inner),
            self._points(inner, anchors=[(0.5,)]),
            self._rho_grid(),
            1e-12,
            **self._comparison_options(),
        )
        return self._create_result(
            passed=comparison.passed,
            max_error=comparison.max_scaled_error,
            details={"rho_used": comparison.rho_used},
            issues=[] if comparison.passed else [f"restriction mismatch {comparison.max_scaled_error:.3e}"],
            clause="support/restriction",
        )
