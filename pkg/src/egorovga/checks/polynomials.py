from typing import List, Tuple

import numpy as np

from .base import BaseCheck
from ..algebra.dist import DensityClass, convolve_delta, iota_embed, schwartz_embed
from ..algebra.functions import Polynomial
from ..algebra.genfun import compare_on_monad


def random_polynomial(rng: np.random.Generator, degree: int) -> Polynomial:
    """Univariate polynomial of exactly ``degree`` with small integer coefficients."""
    coefficients = [int(c) for c in rng.integers(-3, 4, size=degree + 1)]
    if coefficients[-1] == 0:
        coefficients[-1] = 1
    return Polynomial.univariate(coefficients)


class PolynomialCheck(BaseCheck):
    """Polynomials up to degree q pass through the regularisation unchanged and multiply exactly."""

    clause = "polynomials"

    def __init__(self, config, kernel, domain=None, count: int = 20, n_points: int = 50):
        super().__init__("polynomials", config, kernel, domain)
        self.count = count
        self.n_points = n_points

    def run(self):
        return self._aggregate([self._check_reproduction(), self._check_products()])

    def _check_reproduction(self):
        rng = np.random.default_rng(self.config.sampling.seed)
        lo, hi = self.domain.bounding_box(self.config.sampling.window)[0]
        points = rng.uniform(0.95 * lo, 0.95 * hi, size=(self.n_points, 1))
        tolerance = 1e-9
        max_error = 0.0
        issues = []
        for index in range(self.count):
            polynomial = random_polynomial(rng, int(rng.integers(0, self.kernel.q + 1)))
            regularised = convolve_delta(schwartz_embed(polynomial, DensityClass.POLYNOMIAL, self.domain), self.kernel)
            exact = polynomial(points)
            for rho in self._rho_grid():
                error = float(np.max(np.abs(regularised.evaluate(points, self._context(rho)) - exact)))
                max_error = max(max_error, error)
                if error > tolerance:
                    issues.append(f"{polynomial!r} at rho={rho:.3e}: error {error:.3e}")
        return self._create_result(
            passed=not issues,
            max_error=max_error,
            details={"polynomials": self.count, "points": self.n_points, "tolerance": tolerance},
            issues=issues[:10],
            clause="polynomials/reproduction",
        )

    def _degree_pairs(self) -> List[Tuple[int, int]]:
        return [(a, b) for a in range(self.kernel.q + 1) for b in range(self.kernel.q + 1 - a) if a and b]

    def _check_products(self):
        rng = np.random.default_rng(self.config.sampling.seed + 1)
        points = self._points(self.domain)
        tolerance = self.config.tolerances.monad
        max_error = 0.0
        issues = []
        for degree_p, degree_q in self._degree_pairs():
            p, q = random_polynomial(rng, degree_p), random_polynomial(rng, degree_q)
            comparison = compare_on_monad(
                self._embed(p * q), self._embed(p) * self._embed(q), points, self._rho_grid(), tolerance, **self._comparison_options()
            )
            max_error = max(max_error, comparison.max_scaled_error)
            if not comparison.passed:
                issues.append(f"deg {degree_p} x deg {degree_q}: scaled error {comparison.max_scaled_error:.3e}")
        return self._create_result(
            passed=not issues,
            max_error=max_error,
            details={"degree_pairs": [list(pair) for pair in self._degree_pairs()], "tolerance": tolerance},
            issues=issues,
            clause="polynomials/product",
        )

    def _embed(self, polynomial: Polynomial):
        return iota_embed(schwartz_embed(polynomial, DensityClass.POLYNOMIAL, self.domain), self.kernel)
