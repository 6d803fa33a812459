from .base import BaseCheck
from ..algebra.dist import (
    DensityClass,
    dirac,
    distr_mul_smooth,
    iota_embed,
    schwartz_embed,
)
from ..algebra.functions import Polynomial, catalogue_function
from ..algebra.genfun import delta_hat, sigma_embed, zero
from ..algebra.weak import Verdict, association_report

SMOOTH_CASES = ("sin", "exp", "square", "bump")


class AssociationCheck(BaseCheck):
    """iota(S(f)) is associated with sigma(f) for smooth f, and the weak identities that follow."""

    clause = "association"

    def __init__(self, config, kernel, domain=None, functions=SMOOTH_CASES):
        super().__init__("association", config, kernel, domain)
        self.functions = tuple(functions)

    def run(self):
        return self._aggregate(
            [
                self._check_smooth_embeddings(),
                self._check_x_delta(),
                self._check_polynomial_coefficients(),
                self._check_non_association(),
            ]
        )

    def _function(self, name: str):
        if name == "square":
            return Polynomial.monomial(2)
        return catalogue_function(name, self.domain.dim)

    def _report(self, case: str, f, g, expected: Verdict, clause: str):
        tolerance = self.config.tolerances.association
        report = association_report(f, g, self._suite(self.domain), self._rho_grid(), tolerance, **self._pairing_options())
        sweeps = []
        for phi_id, fit in sorted(report.fits.items()):
            sweeps.extend(self._sweep_rows(case, phi_id, fit))
        passed = report.verdict is expected
        return self._create_result(
            passed=passed,
            max_error=report.max_error,
            details={"case": case, "verdict": report.verdict.value, "expected": expected.value, "tolerance": tolerance},
            issues=[] if passed else [f"{case}: verdict {report.verdict.value}, expected {expected.value}"],
            expected_outcome=None if expected is Verdict.TRUE else f"{expected.value} (expected)",
            clause=clause,
            sweeps=sweeps,
            fits={f"{case}/{phi_id}": fit.to_dict() for phi_id, fit in report.fits.items()},
        )

    def _check_smooth_embeddings(self):
        children = []
        for name in self.functions:
            f = self._function(name)
            embedded = iota_embed(schwartz_embed(f, DensityClass.SMOOTH, self.domain), self.kernel)
            children.append(
                self._report(f"iota(S({name}))~sigma({name})", embedded, sigma_embed(f, self.domain), Verdict.TRUE, "association/smooth-embedding")
            )
        result = self._aggregate(children)
        result.clause = "association/smooth-embedding"
        return result

    def _check_x_delta(self):
        """sigma(x) * iota(delta) is associated with zero."""
        product = sigma_embed(Polynomial.monomial(1), self.domain) * iota_embed(dirac(self.domain), self.kernel)
        return self._report("sigma(x)*iota(delta)~0", product, zero(self.domain), Verdict.TRUE, "association/x-delta")

    def _check_polynomial_coefficients(self):
        """iota(P T) is associated with iota(S(P)) iota(T) for polynomial P."""
        p = Polynomial.univariate([1, 0, 1])
        T = dirac(self.domain, alpha=(1,))
        left = iota_embed(distr_mul_smooth(p, T), self.kernel)
        right = iota_embed(schwartz_embed(p, DensityClass.POLYNOMIAL, self.domain), self.kernel) * iota_embed(T, self.kernel)
        return self._report("iota(P*d_delta)~iota(S(P))*iota(d_delta)", left, right, Verdict.TRUE, "association/polynomial-coefficients")

    def _check_non_association(self):
        """Delta and 2 Delta have different weak limits."""
        delta = delta_hat(self.kernel, self.domain)
        return self._report("Delta~2Delta", delta, delta * 2, Verdict.FALSE, "association/non-association")
