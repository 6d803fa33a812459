import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from src.egorovga.algebra.dist import DensityClass, iota_embed, named_distribution, schwartz_embed
from src.egorovga.algebra.domain import Domain, sample_near_standard
from src.egorovga.algebra.functions import catalogue_function
from src.egorovga.algebra.genfun import cutoff, delta_hat, equals_on_monad, sigma_embed
from src.egorovga.algebra.mollifier import psi_power_integral
from src.egorovga.algebra.weak import (
    TestFunction,
    Verdict,
    association_report,
    bump_test_function,
    default_exponents,
    default_suite,
    fit_asymptotics,
    fit_order,
    integrate_region,
    pair,
)
from src.egorovga.core.exceptions import ConfigurationError, DomainError, NotSubdomainError

GRID = [2.0**-j for j in range(8, 17)]


class TestTestFunctions:
    def test_bump_has_unit_mass(self):
        """Given a scaled bump, When integrated, Then its mass is 1."""
        phi = bump_test_function((0.3,), 0.4)
        mass, _ = integrate.quad(lambda t: float(phi(np.array([[t]]))[0].real), -0.1, 0.7, epsabs=1e-13)
        assert mass == pytest.approx(1.0, abs=1e-10)

    def test_default_suite_has_twelve_members(self):
        """Given the real line, When the default suite is built, Then it has twelve distinct ids."""
        suite = default_suite(1, Domain.real_space(1))
        assert len(suite) == 12
        assert len({phi.phi_id for phi in suite}) == 12

    def test_suite_is_filtered_by_domain(self):
        """Given the narrow interval (-0.5, 0.5), When the suite is built, Then every support lies inside."""
        dom = Domain.interval(-0.5, 0.5)
        suite = default_suite(1, dom)
        assert 0 < len(suite) < 12
        assert all(-0.5 <= phi.support[0][0] and phi.support[0][1] <= 0.5 for phi in suite)


class TestFits:
    def test_dictionary_fit_recovers_coefficients(self):
        """Given samples of 3 + 2/rho + rho^2/2, When fitted, Then the coefficients are recovered."""
        samples = [(2.0**-j, 3 + 2 * 2.0**j + 0.5 * 4.0**-j) for j in range(2, 11)]
        fit = fit_asymptotics(samples, [-1, 0, 1, 2, 3])
        assert fit.reliable
        assert fit.standard_part == pytest.approx(3.0, abs=1e-8)
        assert fit.coefficient(-1) == pytest.approx(2.0, abs=1e-9)
        assert fit.leading_exponent(1e-6) == Fraction(-1)

    def test_complex_samples(self):
        """Given complex samples, When fitted, Then the imaginary part is carried."""
        samples = [(rho, (1 + 2j) + rho) for rho in GRID]
        fit = fit_asymptotics(samples, [0, 1, 2])
        assert fit.standard_part == pytest.approx(1 + 2j, abs=1e-10)

    def test_too_few_samples_is_unreliable(self):
        """Given three samples, When fitting three exponents, Then the fit is unreliable rather than raising."""
        fit = fit_asymptotics([(rho, 1.0) for rho in GRID[:3]], [0, 1, 2])
        assert not fit.reliable
        assert math.isinf(fit.residual)

    def test_order_fit_slope(self):
        """Given 5 rho^3, When the order is fitted, Then the slope is 3."""
        order = fit_order([(rho, 5 * rho**3) for rho in GRID])
        assert order.slope == pytest.approx(3.0, abs=1e-9)

    def test_order_fit_needs_two_nonzero_samples(self):
        """Given one non-zero sample, When the order is fitted, Then the slope is infinite."""
        assert math.isinf(fit_order([(0.1, 0.0), (0.05, 1.0)]).slope)

    def test_default_exponents_respect_floor_and_sample_count(self):
        """Given a first-order singularity and nine samples, When the dictionary is built, Then it starts at -1 and keeps two spare samples."""
        exponents = default_exponents(1, 9, 2.0**-8, q=5)
        assert exponents[0] == -1
        assert len(exponents) <= 7
        assert all(2.0 ** (-8 * float(e)) >= 1e-10 for e in exponents if e > 0)


class TestAssociation:
    def test_embedding_of_smooth_function_is_associated(self, interval, kernel):
        """Given sin, When sigma(sin) and iota(S(sin)) are compared weakly, Then they are associated."""
        sin = catalogue_function("sin")
        suite = default_suite(1, interval)[:3]
        report = association_report(
            sigma_embed(sin, interval),
            iota_embed(schwartz_embed(sin, DensityClass.SMOOTH, interval), kernel),
            suite,
            GRID,
            1e-7,
            q=kernel.q,
        )
        assert report.verdict is Verdict.TRUE

    def test_delta_is_not_associated_with_twice_itself(self, interval, kernel):
        """Given delta_hat and 2 delta_hat, When compared weakly, Then the verdict is FALSE."""
        suite = default_suite(1, interval)[:2]
        report = association_report(delta_hat(kernel, interval), 2 * delta_hat(kernel, interval), suite, GRID, 1e-7)
        assert report.verdict is Verdict.FALSE
        assert not report.verdict
        assert set(report.failing) == {phi.phi_id for phi in suite}


    def test_association_is_reflexive_and_symmetric(self, interval, kernel):
        """Given delta_hat, sigma(sin) and iota(S(sin)), When compared both ways, Then each is associated with itself and verdicts agree in both orders."""
        sin = catalogue_function("sin")
        suite = default_suite(1, interval)[:2]
        functions = [
            delta_hat(kernel, interval),
            sigma_embed(sin, interval),
            iota_embed(schwartz_embed(sin, DensityClass.SMOOTH, interval), kernel),
        ]
        for f in functions:
            assert association_report(f, f, suite, GRID, 1e-7, q=kernel.q).verdict is Verdict.TRUE
        for f in functions:
            for g in functions:
                forward = association_report(f, g, suite, GRID, 1e-7, q=kernel.q).verdict
                backward = association_report(g, f, suite, GRID, 1e-7, q=kernel.q).verdict
                assert forward is backward

    def test_equal_functions_are_associated(self, interval, kernel):
        """Given Pi*sigma(sin) and sigma(sin), When they agree on the monad, Then they are also associated."""
        sin = sigma_embed(catalogue_function("sin"), interval)
        cut = cutoff(kernel, interval) * sin
        pts = sample_near_standard(interval, 4, (1, 2), seed=7)
        assert equals_on_monad(cut, sin, pts, GRID[:3], 1e-9)
        suite = default_suite(1, interval)[:3]
        assert association_report(cut, sin, suite, GRID, 1e-9, q=kernel.q).verdict is Verdict.TRUE


class TestPairing:
    def test_pairing_is_bilinear(self, interval, kernel):
        """Given f, g, phi and chi, When paired, Then <2f - 3g, phi> and <f, phi + chi> split into their parts."""
        f = delta_hat(kernel, interval, center=(0.05,))
        g = sigma_embed(catalogue_function("sin"), interval)
        phi = bump_test_function((0.1,), 0.5, phi_id="phi")
        chi = bump_test_function((-0.3,), 0.6, phi_id="chi")
        both = TestFunction(phi.function + chi.function, ((-0.9, 0.6),), phi_id="phi+chi")

        def value(h, test):
            return pair(h, test, GRID, q=kernel.q).standard_part

        assert value(2 * f - 3 * g, phi) == pytest.approx(2 * value(f, phi) - 3 * value(g, phi), abs=1e-9)
        assert value(f, both) == pytest.approx(value(f, phi) + value(f, chi), abs=1e-9)

    def test_derivative_moves_onto_test_function(self, interval, kernel):
        """Given iota(heaviside) and phi, When paired, Then <f', phi> = -<f, phi'>."""
        f = iota_embed(named_distribution("heaviside", interval), kernel)
        phi = bump_test_function((0.1,), 0.5, phi_id="phi")
        left = pair(f.derive(1), phi, GRID, q=kernel.q).standard_part
        right = pair(f, phi.derivative(1), GRID, q=kernel.q).standard_part
        assert left == pytest.approx(-right, abs=1e-8)

    def test_support_too_close_to_boundary_is_refused(self, kernel):
        """Given supp phi within 2^-8 of the boundary, When paired over a grid starting at 2^-8, Then ConfigurationError is raised."""
        dom = Domain.interval(-1.0, 1.0)
        phi = bump_test_function((0.5,), 0.498)
        with pytest.raises(ConfigurationError):
            pair(delta_hat(kernel, dom), phi, GRID, q=kernel.q)


class TestIntegrateRegion:
    def test_sigma_integral(self, interval):
        """Given sigma(sin), When integrated over [0, 1], Then the standard part is 1 - cos 1."""
        fit = integrate_region(sigma_embed(catalogue_function("sin"), interval), Domain.interval(0.0, 1.0), GRID)
        assert fit.standard_part.real == pytest.approx(1 - math.cos(1.0), abs=1e-9)

    @pytest.mark.parametrize("power", [2, 3])
    def test_kernel_power_grows_like_profile_integral(self, interval, kernel, power):
        """Given Delta^n, When integrated over [-1, 1], Then it grows like rho^(1-n) times int psi^n."""
        fit = integrate_region(delta_hat(kernel, interval) ** power, Domain.interval(-1.0, 1.0), GRID, q=kernel.q)
        assert fit_order(fit.samples).slope == pytest.approx(1 - power, abs=0.1)
        assert fit.coefficient(1 - power).real == pytest.approx(psi_power_integral(kernel, power), abs=1e-4)

    def test_unbounded_region_is_rejected(self):
        """Given the real line as region, When integrating, Then DomainError is raised."""
        line = Domain.real_space(1)
        with pytest.raises(DomainError):
            integrate_region(sigma_embed(catalogue_function("sin"), line), line, GRID)

    def test_region_must_fit_in_domain(self, interval):
        """Given a region poking out of the domain, When integrating, Then NotSubdomainError is raised."""
        with pytest.raises(NotSubdomainError):
            integrate_region(sigma_embed(catalogue_function("sin"), interval), Domain.interval(1.0, 3.0), GRID)
