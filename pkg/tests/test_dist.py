import numpy as np
import pytest
from scipy import integrate

from src.egorovga.algebra.dist import (
    Distribution,
    change_of_variables_dist,
    dirac,
    distr_derive,
    distr_mul_smooth,
    distr_pair,
    iota_embed,
    named_distribution,
    pushforward_genfunc,
    restrict_distribution,
)
from src.egorovga.algebra.domain import Domain
from src.egorovga.algebra.functions import Polynomial
from src.egorovga.algebra.maps import Diffeomorphism
from src.egorovga.algebra.weak import Verdict, association_report, bump_test_function, pair
from src.egorovga.core.exceptions import DomainError, NotSubdomainError


@pytest.fixture
def phi():
    return bump_test_function((0.1,), 0.5, phi_id="phi")


class TestClassicalPairing:
    def test_dirac_pairs_to_point_value(self, interval, phi):
        """Given delta_0, When paired with phi, Then the result is phi(0)."""
        assert distr_pair(dirac(interval), phi) == pytest.approx(complex(phi(np.array([[0.0]]))[0]))

    def test_derivative_moves_onto_test_function(self, interval, phi):
        """Given delta_0', When paired with phi, Then the result is -phi'(0)."""
        expected = -phi.derivative(1)(np.array([[0.0]]))[0]
        assert distr_pair(distr_derive(dirac(interval), 1), phi) == pytest.approx(complex(expected))
        assert distr_pair(named_distribution("d_delta", interval), phi) == pytest.approx(complex(expected))

    def test_x_times_delta_prime_is_minus_delta(self, interval, phi):
        """Given x * delta_0', When paired, Then it matches -delta_0."""
        product = distr_mul_smooth(Polynomial.univariate([0, 1]), named_distribution("d_delta", interval))
        assert distr_pair(product, phi) == pytest.approx(-distr_pair(dirac(interval), phi))

    def test_heaviside_density(self, interval, phi):
        """Given the Heaviside density, When paired, Then the result is the integral of phi over x >= 0."""
        centre, scale = 0.1, 0.5
        expected, _ = integrate.quad(lambda t: float(phi(np.array([[t]]))[0].real), 0.0, centre + scale)
        assert distr_pair(named_distribution("heaviside", interval), phi) == pytest.approx(expected, abs=1e-10)


class TestStructure:
    def test_restriction_drops_outside_point_masses(self, interval):
        """Given delta_0.5 + delta_-1, When restricted to (0, 1), Then only delta_0.5 is left."""
        T = dirac(interval, (0.5,)) + dirac(interval, (-1.0,))
        restricted = restrict_distribution(T, Domain.interval(0.0, 1.0))
        assert len(restricted.terms) == 1
        assert restricted.terms[0].base.location == (0.5,)

    def test_restriction_to_larger_domain_raises(self, interval):
        """Given a larger domain, When restricting, Then NotSubdomainError is raised."""
        with pytest.raises(NotSubdomainError):
            restrict_distribution(dirac(interval), Domain.interval(-3.0, 3.0))

    def test_sum_over_different_domains_raises(self, interval):
        """Given distributions on different domains, When added, Then DomainError is raised."""
        with pytest.raises(DomainError):
            dirac(interval) + dirac(Domain.interval(-1.0, 1.0))

    def test_affine_change_of_variables(self, interval):
        """Given delta_0 and theta(x) = 2x + 1, When transported, Then the pairing is 2 phi(1)."""
        theta = Diffeomorphism.affine([[2.0]], [1.0])
        moved = change_of_variables_dist(dirac(interval), theta, theta.map_domain(interval))
        test = bump_test_function((1.0,), 0.5)
        assert distr_pair(moved, test) == pytest.approx(2 * complex(test(np.array([[1.0]]))[0]))

    def test_serialization_keeps_terms(self, interval):
        """Given a two-term distribution, When rebuilt from its data, Then the pairings agree."""
        T = dirac(interval, (0.5,), coeff=2.0) + named_distribution("sin", interval)
        rebuilt = Distribution.from_dict(T.to_dict())
        test = bump_test_function((0.2,), 0.6)
        assert distr_pair(rebuilt, test) == pytest.approx(distr_pair(T, test))


class TestEmbedding:
    def test_iota_of_delta_recovers_point_value(self, interval, kernel, phi):
        """Given iota(delta_0), When paired over the default rho grid, Then the standard part is phi(0)."""
        grid = [2.0**-j for j in range(8, 17)]
        fit = pair(iota_embed(dirac(interval), kernel), phi, grid, q=kernel.q)
        assert fit.reliable
        assert abs(fit.standard_part - distr_pair(dirac(interval), phi)) < 1e-7

    @pytest.mark.parametrize("case", ["delta", "sin"])
    def test_affine_pushforward_commutes_with_iota(self, kernel, case):
        """Given theta(x) = 2x + 1, When theta_* iota(T) is compared with iota(T(theta)), Then they are associated to 1e-6."""
        source = Domain.interval(-2.0, 2.0)
        theta = Diffeomorphism.affine([[2.0]], [1.0])
        target = theta.map_domain(source)
        T = named_distribution(case, source)
        pushed = pushforward_genfunc(iota_embed(T, kernel), theta, target)
        transported = iota_embed(change_of_variables_dist(T, theta, target), kernel)
        suite = [bump_test_function((1.0,), 0.5, phi_id="centred"), bump_test_function((1.4,), 0.8, phi_id="shifted")]
        grid = [2.0**-j for j in range(8, 17)]
        report = association_report(pushed, transported, suite, grid, 1e-6, q=kernel.q)
        assert report.verdict is Verdict.TRUE, report.failing
        assert report.max_error < 1e-6
