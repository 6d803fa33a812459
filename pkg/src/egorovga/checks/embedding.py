from typing import Dict, List, Optional

import numpy as np

from .base import BaseCheck
from ..algebra.dist import (
    Distribution,
    DensityClass,
    convolve_delta,
    dirac,
    distr_pair,
    iota_embed,
    named_distribution,
    pushforward_genfunc,
    schwartz_embed,
)
from ..algebra.domain import Domain
from ..algebra.functions import Polynomial, catalogue_function
from ..algebra.genfun import compare_on_monad, sigma_embed
from ..algebra.maps import Diffeomorphism
from ..algebra.weak import fit_order, pair, pairing_samples

ORDER_GRID = (0.5, 0.4, 0.3, 0.25)


class EmbeddingCheck(BaseCheck):
    """Pairings of iota(T) recover <T, phi>, with the expected error order for smooth densities."""

    clause = "embedding"

    def __init__(
        self,
        config,
        kernel,
        domain=None,
        cases=("delta", "d_delta", "sin", "heaviside"),
        distributions: Optional[Dict[str, Distribution]] = None,
    ):
        super().__init__("embedding", config, kernel, domain)
        self.cases = tuple(cases)
        self.distributions = dict(distributions or {})

    def _catalogue(self) -> Dict[str, Distribution]:
        """Named shorthands first, then distributions supplied by a scenario."""
        catalogue = {case: named_distribution(case, self.domain) for case in self.cases}
        catalogue.update(self.distributions)
        return catalogue

    def run(self):
        return self._aggregate(
            [
                self._check_pairing_fidelity(),
                self._check_error_order(),
                self._check_reflected_delta(),
                self._check_linearity(),
            ]
        )

    def _check_pairing_fidelity(self):
        tolerance = self.config.tolerances.association
        suite = self._suite(self.domain)
        sweeps, fits, issues = [], {}, []
        max_error = 0.0
        catalogue = self._catalogue()
        for case, T in catalogue.items():
            embedded = iota_embed(T, self.kernel)
            for phi in suite:
                fit = pair(embedded, phi, self._rho_grid(), **self._pairing_options())
                sweeps.extend(self._sweep_rows(f"iota({case})", phi.phi_id, fit))
                fits[f"iota({case})/{phi.phi_id}"] = fit.to_dict()
                if not fit.reliable:
                    issues.append(f"iota({case}) against {phi.phi_id}: unreliable fit ({fit.message})")
                    continue
                error = abs(fit.standard_part - distr_pair(T, phi))
                max_error = max(max_error, error)
                if error > tolerance:
                    issues.append(f"iota({case}) against {phi.phi_id}: error {error:.3e}")
        return self._create_result(
            passed=not issues,
            max_error=max_error,
            details={"cases": list(catalogue), "test_functions": len(suite), "tolerance": tolerance},
            issues=issues,
            clause="embedding/pairing-fidelity",
            sweeps=sweeps,
            fits=fits,
        )

    def _check_error_order(self):
        """Slope of |<S(f) * Delta_rho, phi> - <f, phi>| against rho on a coarse grid."""
        line = Domain.real_space(1)
        T = schwartz_embed(catalogue_function("sin"), DensityClass.SMOOTH, line)
        regularised = convolve_delta(T, self.kernel)
        required = self.kernel.q + 1 - 0.5
        slopes: Dict[str, float] = {}
        issues: List[str] = []
        for phi in self._suite(self.domain):
            exact = distr_pair(T, phi)
            if abs(exact) < 1e-3:
                continue
            samples = pairing_samples(
                regularised,
                phi,
                ORDER_GRID,
                self.config.quadrature.pairing_nodes,
                self.config.quadrature.pairing_panels,
                self.config.quadrature.nodes_per_axis,
            )
            order = fit_order([(rho, value - exact) for rho, value in samples])
            slopes[phi.phi_id] = order.slope
            if order.slope < required:
                issues.append(f"{phi.phi_id}: error order {order.slope:.2f} below {required}")
        worst = min(slopes.values()) if slopes else float("nan")
        return self._create_result(
            passed=bool(slopes) and not issues,
            max_error=None,
            details={"orders": slopes, "required": required, "rho_grid": list(ORDER_GRID), "worst": worst},
            issues=issues or ([] if slopes else ["no test function pairs non-trivially with sin"]),
            clause="embedding/error-order",
        )

    def _check_reflected_delta(self):
        """Delta_rho(-xi) and Delta_rho(xi) agree on the monad of a symmetric domain."""
        symmetric = Domain.interval(-2.0, 2.0)
        embedded = iota_embed(dirac(symmetric), self.kernel)
        reflection = Diffeomorphism.affine([[-1.0]], [0.0], name="reflection")
        reflected = pushforward_genfunc(embedded, reflection, symmetric)
        comparison = compare_on_monad(
            reflected,
            embedded,
            self._points(symmetric, anchors=[(0.0,)]),
            self._rho_grid(),
            1e-12,
            **self._comparison_options(),
        )
        return self._create_result(
            passed=comparison.passed,
            max_error=comparison.max_scaled_error,
            details={"rho_used": comparison.rho_used},
            issues=[] if comparison.passed else [f"reflection changes Delta by {comparison.max_scaled_error:.3e}"],
            clause="embedding/reflected-delta",
        )

    def _check_linearity(self):
        """iota(2 delta + 3 S(sin)) = 2 iota(delta) + 3 iota(S(sin)); sigma is linear on smooth functions."""
        sine = catalogue_function("sin")
        square = Polynomial.monomial(2)
        delta = dirac(self.domain)
        smooth = schwartz_embed(sine, DensityClass.SMOOTH, self.domain)
        combined: Distribution = delta * 2 + smooth * 3
        points = self._points(self.domain, anchors=[(0.0,)])
        tolerance = self.config.tolerances.monad

        iota_side = compare_on_monad(
            iota_embed(combined, self.kernel),
            iota_embed(delta, self.kernel) * 2 + iota_embed(smooth, self.kernel) * 3,
            points,
            self._rho_grid(),
            tolerance,
            **self._comparison_options(),
        )
        sigma_side = compare_on_monad(
            sigma_embed(sine * 2 + square, self.domain),
            sigma_embed(sine, self.domain) * 2 + sigma_embed(square, self.domain),
            points,
            self._rho_grid(),
            tolerance,
            **self._comparison_options(),
        )
        issues = []
        if not iota_side.passed:
            issues.append(f"iota is not linear: scaled error {iota_side.max_scaled_error:.3e}")
        if not sigma_side.passed:
            issues.append(f"sigma is not linear: scaled error {sigma_side.max_scaled_error:.3e}")
        return self._create_result(
            passed=not issues,
            max_error=float(np.max([iota_side.max_scaled_error, sigma_side.max_scaled_error])),
            issues=issues,
            clause="embedding/linearity",
        )
