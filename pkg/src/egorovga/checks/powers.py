import math

from .base import BaseCheck
from ..algebra.domain import Domain
from ..algebra.functions import catalogue_function
from ..algebra.genfun import delta_hat, sigma_embed
from ..algebra.mollifier import psi_power_integral
from ..algebra.weak import fit_order, integrate_region

EXPONENT_TOLERANCE = 0.1
COEFFICIENT_TOLERANCE = 1e-4
INTEGRAL_TOLERANCE = 1e-9


class PowersCheck(BaseCheck):
    """int_{-1}^{1} Delta^n grows like rho^(1-n) int psi^n; sigma(f) integrates like f."""

    clause = "powers"

    def __init__(self, config, kernel, domain=None, powers=(2, 3)):
        super().__init__("powers", config, kernel, domain)
        self.powers = tuple(powers)

    def _region(self) -> Domain:
        return Domain((((-1.0, 1.0),),), 1, closed=True)

    def run(self):
        children = [self._check_power(power) for power in self.powers]
        children.append(self._check_sigma_integral())
        return self._aggregate(children)

    def _integrate(self, f, region):
        options = self._pairing_options()
        return integrate_region(
            f,
            region,
            self._rho_grid(),
            nodes=options["nodes"],
            panels=options["panels"],
            nodes_per_axis=options["nodes_per_axis"],
            residual_tol=options["residual_tol"],
            floor=options["floor"],
            q=options["q"],
        )

    def _check_power(self, power: int):
        domain = Domain.interval(-2.0, 2.0)
        f = delta_hat(self.kernel, domain) ** power
        fit = self._integrate(f, self._region())
        expected_exponent = 1 - power
        oracle = psi_power_integral(self.kernel, power)
        measured = fit_order(fit.samples).slope
        coefficient = fit.coefficient(expected_exponent)
        leading = fit.leading_exponent(COEFFICIENT_TOLERANCE * abs(oracle))
        issues = []
        if not fit.reliable:
            issues.append(f"Delta^{power}: unreliable fit ({fit.message})")
        if abs(measured - expected_exponent) > EXPONENT_TOLERANCE:
            issues.append(f"Delta^{power}: measured exponent {measured:.3f}, expected {expected_exponent}")
        if leading != expected_exponent:
            issues.append(f"Delta^{power}: leading fitted exponent {leading}, expected {expected_exponent}")
        error = abs(coefficient - oracle)
        if error > COEFFICIENT_TOLERANCE:
            issues.append(f"Delta^{power}: coefficient {coefficient:.10g}, oracle {oracle:.10g}")
        return self._create_result(
            passed=not issues,
            max_error=error,
            details={
                "power": power,
                "measured_exponent": measured,
                "fitted_coefficient": [coefficient.real, coefficient.imag],
                "oracle": oracle,
            },
            issues=issues,
            clause=f"powers/delta-{power}",
            sweeps=self._sweep_rows(f"int Delta^{power}", "[-1,1]", fit),
            fits={f"Delta^{power}": fit.to_dict()},
        )

    def _check_sigma_integral(self):
        region = Domain((((0.0, 1.0),),), 1, closed=True)
        fit = self._integrate(sigma_embed(catalogue_function("sin"), Domain.interval(-2.0, 2.0)), region)
        error = abs(fit.standard_part - (1.0 - math.cos(1.0)))
        passed = fit.reliable and error <= INTEGRAL_TOLERANCE
        return self._create_result(
            passed=passed,
            max_error=error,
            details={"exact": 1.0 - math.cos(1.0)},
            issues=[] if passed else [f"int_0^1 sigma(sin) off by {error:.3e}"],
            clause="powers/sigma-integral",
            fits={"sigma(sin)": fit.to_dict()},
        )
