from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.egorovga.algebra.scalars import (
    RHO,
    AsymptoticScalar,
    Magnitude,
    Ordering,
    classify,
    scalar_cmp,
    scalar_inv,
    standard_part,
)
from src.egorovga.core.exceptions import DivisionByZeroError, NotFiniteError, NotOrderedError

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)
exact_terms = st.lists(st.tuples(st.integers(min_value=-3, max_value=3), fractions), max_size=4)


def exact_scalar(terms):
    return AsymptoticScalar(tuple((Fraction(e), c) for e, c in terms), truncation_order=None)


scalars = exact_terms.map(exact_scalar)


class TestFieldLaws:
    """Exact scalars obey the commutative ring laws with no rounding."""

    @settings(max_examples=200, deadline=None)
    @given(scalars, scalars, scalars)
    def test_ring_axioms(self, a, b, c):
        """Given three exact scalars, When combined, Then addition and multiplication are commutative, associative and distributive."""
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=100, deadline=None)
    @given(scalars)
    def test_additive_inverse(self, a):
        """Given a scalar, When its negation is added, Then the result is zero."""
        assert (a + (-a)).is_zero

    def test_product_with_inverse_is_one_on_retained_exponents(self):
        """Given 1 + rho, When multiplied by its truncated inverse, Then every retained exponent matches 1."""
        # Given
        a = AsymptoticScalar.one() + RHO

        # When
        product = a * scalar_inv(a)

        # Then
        assert product == 1
        assert product.truncation_order == 8

    def test_inverse_of_zero_raises(self):
        """Given the zero scalar, When inverted, Then DivisionByZeroError is raised."""
        with pytest.raises(DivisionByZeroError):
            scalar_inv(AsymptoticScalar.zero())


class TestOrdering:
    def test_rho_is_positive_infinitesimal(self):
        """Given rho, When compared with tiny positive reals, Then it is smaller than all of them and positive."""
        assert RHO > 0
        assert RHO < 1e-300
        assert scalar_cmp(RHO, RHO**2) is Ordering.GT

    def test_complex_scalars_are_not_ordered(self):
        """Given a scalar with an imaginary part, When compared, Then NotOrderedError is raised."""
        with pytest.raises(NotOrderedError):
            scalar_cmp(AsymptoticScalar.constant(1j), 1)

    def test_classification(self):
        """Given scalars of different orders, When classified, Then each lands in its magnitude class."""
        assert classify(0) is Magnitude.ZERO
        assert classify(RHO) is Magnitude.INFINITESIMAL
        assert classify(2 + RHO) is Magnitude.FINITE
        assert classify(RHO**-1) is Magnitude.INFINITE


class TestStandardPart:
    def test_standard_part_of_finite_scalar(self):
        """Given 3 + 5 rho, When the standard part is taken, Then it is 3."""
        assert standard_part(3 + 5 * RHO) == 3

    def test_standard_part_of_infinite_scalar_raises(self):
        """Given 1/rho, When the standard part is taken, Then NotFiniteError is raised."""
        with pytest.raises(NotFiniteError):
            standard_part(RHO**-1)


class TestExtras:
    def test_square_root_of_monomial(self):
        """Given 4 rho^2, When the square root is taken, Then it is 2 rho."""
        assert (4 * RHO**2).root(2) == AsymptoticScalar.monomial(1, 2)

    def test_evaluate_at_concrete_rho(self):
        """Given 1 + rho^-1, When evaluated at rho = 1/4, Then the value is 5."""
        assert (1 + RHO**-1).evaluate(0.25) == pytest.approx(5.0)

    def test_isclose_tolerates_rounding(self):
        """Given two scalars differing by float noise, When compared with isclose, Then they match."""
        assert AsymptoticScalar.constant(0.1 + 0.2).isclose(0.3)


def magnitude(a: AsymptoticScalar, rho: float) -> float:
    return sum(abs(complex(c)) * rho ** float(e) for e, c in a.terms)


class TestNumericSampling:
    """Exact series arithmetic agrees with float arithmetic on the sampled values."""

    RHOS = [2.0**-j for j in range(8, 17)]

    @settings(max_examples=100, deadline=None)
    @given(scalars, scalars)
    def test_sum_and_product_match_sampled_values(self, a, b):
        """Given two exact scalars, When combined and sampled at rho = 2^-8 .. 2^-16, Then the samples combine the same way."""
        for rho in self.RHOS:
            bound = 1e-12 * (1 + magnitude(a, rho)) * (1 + magnitude(b, rho))
            assert abs((a + b).evaluate(rho) - (a.evaluate(rho) + b.evaluate(rho))) <= bound
            assert abs((a * b).evaluate(rho) - a.evaluate(rho) * b.evaluate(rho)) <= bound

    @settings(max_examples=100, deadline=None)
    @given(scalars, scalars)
    def test_ordering_matches_sign_at_smallest_rho(self, a, b):
        """Given two exact real scalars, When ordered, Then the sign of their sampled difference at rho = 2^-16 agrees."""
        difference = (a - b).evaluate(self.RHOS[-1]).real
        ordering = scalar_cmp(a, b)
        if ordering is Ordering.EQ:
            assert difference == 0
        elif ordering is Ordering.GT:
            assert difference > 0
        else:
            assert difference < 0
