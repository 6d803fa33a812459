import numpy as np
import pytest

from src.egorovga.algebra.dist import DensityClass, iota_embed, schwartz_embed
from src.egorovga.algebra.domain import Domain, sample_near_standard
from src.egorovga.algebra.functions import Polynomial, catalogue_function
from src.egorovga.algebra.genfun import (
    EvalContext,
    compare_on_monad,
    constant,
    cutoff,
    delta_hat,
    equals_on_monad,
    restrict,
    sigma_embed,
    support_estimate,
    zero,
)
from src.egorovga.algebra.scalars import RHO
from src.egorovga.core.exceptions import DomainError, EmptyDomainError, NotSubdomainError, UnsupportedTermError

POINTS = np.array([[-1.3], [-0.2], [0.4], [1.1]])


class TestEvaluation:
    def test_sigma_is_pointwise(self, interval):
        """Given sigma(sin), When evaluated, Then it returns sin at every rho."""
        f = sigma_embed(catalogue_function("sin"), interval)
        values = f.evaluate(POINTS, EvalContext(0.01))
        np.testing.assert_allclose(values.real, np.sin(POINTS[:, 0]), atol=1e-14)

    def test_rough_function_has_no_sigma(self, interval):
        """Given the Heaviside function, When sigma-embedded, Then UnsupportedTermError is raised."""
        with pytest.raises(UnsupportedTermError):
            sigma_embed(catalogue_function("heaviside"), interval)

    def test_scalar_leaf_evaluates_at_rho(self, interval):
        """Given the constant rho, When evaluated at rho = 0.01, Then the value is 0.01."""
        assert constant(RHO, interval).eval([0.0], EvalContext(0.01)) == pytest.approx(0.01)

    def test_delta_hat_peak(self, interval, kernel):
        """Given delta_hat, When evaluated at its centre, Then the value is psi(0)/rho."""
        value = delta_hat(kernel, interval).eval([0.0], EvalContext(0.01))
        assert value == pytest.approx(float(kernel.psi(0.0)) / 0.01)

    def test_rho_outside_range_is_rejected(self):
        """Given rho above rho_max, When a context is built, Then DomainError is raised."""
        with pytest.raises(DomainError):
            EvalContext(0.75)


class TestAlgebra:
    def test_product_and_derivative(self, interval):
        """Given sigma(x), When squared and differentiated, Then the results are x^2 and 2x."""
        x = sigma_embed(Polynomial.univariate([0, 1]), interval)
        ctx = EvalContext(0.01)
        np.testing.assert_allclose((x * x).evaluate(POINTS, ctx).real, POINTS[:, 0] ** 2)
        np.testing.assert_allclose((x * x).derive(1).evaluate(POINTS, ctx).real, 2 * POINTS[:, 0])

    def test_sigma_derivative_matches_classical(self, interval):
        """Given sigma(sin), When differentiated, Then the result is cos."""
        f = sigma_embed(catalogue_function("sin"), interval).derive(1)
        np.testing.assert_allclose(f.evaluate(POINTS, EvalContext(0.01)).real, np.cos(POINTS[:, 0]), atol=1e-14)

    def test_mixing_domains_is_rejected(self, interval):
        """Given functions on different domains, When added, Then DomainError is raised."""
        f = sigma_embed(catalogue_function("sin"), interval)
        g = sigma_embed(catalogue_function("sin"), Domain.interval(-1.0, 1.0))
        with pytest.raises(DomainError):
            f + g

    def test_restriction_requires_subdomain(self, interval):
        """Given a larger or empty set, When restricting, Then the matching error is raised."""
        f = sigma_embed(catalogue_function("sin"), interval)
        with pytest.raises(NotSubdomainError):
            restrict(f, Domain.interval(-3.0, 3.0))
        with pytest.raises(EmptyDomainError):
            restrict(f, Domain.empty(1, closed=False))


class TestMonadEquality:
    GRID = [2.0**-j for j in range(8, 11)]

    def test_polynomial_product_is_usual_product(self, interval):
        """Given polynomials P and Q, When sigma(P)*sigma(Q) is compared with sigma(PQ), Then they agree on the monad."""
        P = Polynomial.univariate([1, -2, 0, 1])
        Q = Polynomial.univariate([0, 3, 1])
        pts = sample_near_standard(interval, 4, (1, 2), seed=7)
        assert equals_on_monad(sigma_embed(P, interval) * sigma_embed(Q, interval), sigma_embed(P * Q, interval), pts, self.GRID, 1e-9)

    def test_infinitesimal_shift_is_detected(self, interval):
        """Given sigma(sin) + rho, When compared with sigma(sin), Then they differ at tight tolerance."""
        f = sigma_embed(catalogue_function("sin"), interval)
        pts = sample_near_standard(interval, 2, (1,), seed=7)
        assert not equals_on_monad(f + constant(RHO, interval), f, pts, self.GRID, 1e-9)

    def test_embedded_polynomial_is_reproduced(self, interval, kernel):
        """Given a cubic P, When iota(S(P)) is compared with sigma(P), Then they agree on the monad."""
        P = Polynomial.univariate([1, -2, 0, 1])
        embedded = iota_embed(schwartz_embed(P, DensityClass.POLYNOMIAL, interval), kernel)
        pts = sample_near_standard(interval, 4, (1, 2), seed=7)
        comparison = compare_on_monad(embedded, sigma_embed(P, interval), pts, self.GRID, 1e-9)
        assert comparison.passed

    @pytest.mark.parametrize("degree", range(6))
    def test_every_monomial_up_to_degree_five_is_reproduced(self, interval, kernel, degree):
        """Given x^k with k <= 2m + 1 = 5, When iota(S(x^k)) is compared with sigma(x^k), Then they agree on the monad."""
        assert 2 * kernel.m + 1 == 5
        monomial = Polynomial.univariate([0] * degree + [1])
        embedded = iota_embed(schwartz_embed(monomial, DensityClass.POLYNOMIAL, interval), kernel)
        pts = sample_near_standard(interval, 4, (1, 2), seed=7)
        assert equals_on_monad(embedded, sigma_embed(monomial, interval), pts, self.GRID, 1e-9)

    def test_tolerance_is_relative_for_large_values(self, interval):
        """Given values of size rho^-2 and of size 1, When compared, Then large values pass a relative 1e-12 gap and unit values fail an absolute 1e-6 gap."""
        pts = sample_near_standard(interval, 2, (1,), seed=7)
        large = constant(RHO**-2, interval)
        assert equals_on_monad(large * (1 + 1e-12), large, pts, self.GRID, 1e-9)
        unit = constant(1, interval)
        comparison = compare_on_monad(unit + 1e-6, unit, pts, self.GRID, 1e-9)
        assert not comparison.passed
        assert comparison.max_error == pytest.approx(1e-6, rel=1e-6)

    def test_vanishing_on_a_cover_means_vanishing(self, interval, kernel):
        """Given Pi*sigma(sin) - sigma(sin), When it vanishes on each box of a cover, Then it vanishes on the whole domain."""
        f = cutoff(kernel, interval) * sigma_embed(catalogue_function("sin"), interval) - sigma_embed(catalogue_function("sin"), interval)
        cover = [Domain.interval(-2.0, 0.5), Domain.interval(-0.5, 2.0)]
        for member in cover:
            local = restrict(f, member)
            assert equals_on_monad(local, zero(member), sample_near_standard(member, 4, (1, 2), seed=7), self.GRID, 1e-9)
        assert equals_on_monad(f, zero(interval), sample_near_standard(interval, 4, (1, 2), seed=7), self.GRID, 1e-9)

    def test_nonvanishing_is_seen_on_some_member_of_the_cover(self, interval, kernel):
        """Given delta_hat at 0, When tested on a cover, Then the member holding 0 reports it."""
        f = delta_hat(kernel, interval)
        member = Domain.interval(-0.5, 2.0)
        pts = sample_near_standard(member, 4, (1, 2), seed=7, anchors=[(0.0,)])
        assert not equals_on_monad(restrict(f, member), zero(member), pts, self.GRID, 1e-9)

    def test_restriction_is_a_homomorphism(self, interval, kernel):
        """Given f = delta_hat and g = sigma(sin), When restricted to (-1, 1), Then restrict(fg) = restrict(f) restrict(g) and likewise for sums."""
        sub = Domain.interval(-1.0, 1.0)
        f = delta_hat(kernel, interval)
        g = sigma_embed(catalogue_function("sin"), interval)
        pts = sample_near_standard(sub, 4, (1, 2), seed=7, anchors=[(0.0,)])
        assert equals_on_monad(restrict(f * g, sub), restrict(f, sub) * restrict(g, sub), pts, self.GRID, 1e-12)
        assert equals_on_monad(restrict(f + g, sub), restrict(f, sub) + restrict(g, sub), pts, self.GRID, 1e-12)


class TestLeibnizRule:
    @pytest.mark.parametrize(
        "points",
        [np.array([[-0.05], [0.02], [0.07]]), np.array([[-1.75], [-1.65], [1.68]])],
        ids=["kernel-support", "cutoff-layer"],
    )
    def test_product_derivative_matches_finite_differences(self, interval, kernel, points):
        """Given f = delta_hat + Pi and g = sigma(x^2 sin), When (fg)' is evaluated, Then it matches central differences and f'g + fg'."""
        f = delta_hat(kernel, interval) + cutoff(kernel, interval)
        g = sigma_embed(Polynomial.univariate([0, 0, 1]), interval) * sigma_embed(catalogue_function("sin"), interval)
        ctx = EvalContext(0.1)
        product = f * g
        step = 1e-5 * np.maximum(1.0, np.abs(points))
        central = (product.evaluate(points + step, ctx) - product.evaluate(points - step, ctx)) / (2 * step[:, 0])
        derivative = product.derive(1).evaluate(points, ctx)
        leibniz = (f.derive(1) * g + f * g.derive(1)).evaluate(points, ctx)
        scale = np.maximum(1.0, np.abs(derivative))
        assert np.all(np.abs(derivative - central) / scale < 1e-6)
        np.testing.assert_allclose(derivative, leibniz, rtol=1e-12, atol=1e-12)


class TestSupportEstimate:
    GRID = [2.0**-j for j in range(8, 11)]

    def test_point_mass_gives_its_cell(self, interval, kernel):
        """Given delta_hat at 0.37, When the support is estimated at step 0.1, Then only the cell holding 0.37 is reported."""
        cells = support_estimate(delta_hat(kernel, interval, center=(0.37,)), 0.1, self.GRID)
        assert len(cells) == 1
        ((lo, hi),) = cells[0]
        assert lo <= 0.37 <= hi

    def test_zero_has_empty_support(self, interval):
        """Given the zero function, When the support is estimated, Then no cell is reported."""
        assert support_estimate(zero(interval), 0.25, self.GRID) == []
