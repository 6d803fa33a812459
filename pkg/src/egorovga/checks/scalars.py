from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np

from .base import BaseCheck
from ..algebra.scalars import RHO, AsymptoticScalar, Ordering, scalar_cmp, scalar_inv

ScalarLaw = Callable[[AsymptoticScalar, AsymptoticScalar, AsymptoticScalar], bool]


def _order_is_translation_invariant(a, b, c) -> bool:
    return scalar_cmp(a, b) == scalar_cmp(a + c, b + c)


def _positive_products_are_positive(a, b, c) -> bool:
    zero = AsymptoticScalar.zero()
    if scalar_cmp(a, zero) is Ordering.GT and scalar_cmp(b, zero) is Ordering.GT:
        return scalar_cmp(a * b, zero) is Ordering.GT
    return True


def _inverse_law(a, b, c) -> bool:
    if a.is_zero:
        return True
    return a * scalar_inv(a) == 1


FIELD_LAWS: Dict[str, ScalarLaw] = {
    "additive_commutativity": lambda a, b, c: a + b == b + a,
    "additive_associativity": lambda a, b, c: (a + b) + c == a + (b + c),
    "multiplicative_commutativity": lambda a, b, c: a * b == b * a,
    "multiplicative_associativity": lambda a, b, c: (a * b) * c == a * (b * c),
    "distributivity": lambda a, b, c: a * (b + c) == a * b + a * c,
    "additive_inverse": lambda a, b, c: (a + (-a)).is_zero,
    "multiplicative_identity": lambda a, b, c: a * 1 == a,
    "multiplicative_inverse": _inverse_law,
    "order_translation": _order_is_translation_invariant,
    "order_products": _positive_products_are_positive,
}


def random_scalar(rng: np.random.Generator, max_terms: int = 3) -> AsymptoticScalar:
    """An exact scalar with small rational exponents and coefficients."""
    count = int(rng.integers(1, max_terms + 1))
    terms = []
    for _ in range(count):
        exponent = Fraction(int(rng.integers(-4, 7)), int(rng.integers(1, 3)))
        coefficient = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        terms.append((exponent, coefficient))
    return AsymptoticScalar(tuple(terms), truncation_order=None)


class ScalarFieldCheck(BaseCheck):
    """Field and order axioms on random exact scalars, and rho below every positive real."""

    clause = "scalars/ordered-field"

    def __init__(self, config, kernel, domain=None, cases: int = 1000, smallest_power: int = 300):
        super().__init__("scalars", config, kernel, domain)
        self.cases = cases
        self.smallest_power = smallest_power

    def run(self):
        return self._aggregate([self._check_field_laws(), self._check_infinitesimal_order()])

    def _check_field_laws(self):
        rng = np.random.default_rng(self.config.sampling.seed)
        failures: Dict[str, int] = {name: 0 for name in FIELD_LAWS}
        examples: List[Tuple[str, str]] = []
        for _ in range(self.cases):
            a, b, c = (random_scalar(rng) for _ in range(3))
            for name, law in FIELD_LAWS.items():
                if not law(a, b, c):
                    failures[name] += 1
                    if len(examples) < 5:
                        examples.append((name, f"a={a!r}, b={b!r}, c={c!r}"))
        failed = {name: count for name, count in failures.items() if count}
        return self._create_result(
            passed=not failed,
            max_error=float(sum(failed.values())),
            details={"cases": self.cases, "laws": sorted(FIELD_LAWS), "failures": failed},
            issues=[f"{name} fails for {example}" for name, example in examples],
            clause="scalars/field-axioms",
        )

    def _check_infinitesimal_order(self):
        wrong = [
            power
            for power in range(1, self.smallest_power + 1)
            if scalar_cmp(RHO, Fraction(1, 10**power)) is not Ordering.LT
        ]
        return self._create_result(
            passed=not wrong,
            max_error=float(len(wrong)),
            details={"powers_checked": self.smallest_power, "not_smaller": wrong[:10]},
            issues=[f"rho is not below 10^-{power}" for power in wrong[:10]],
            clause="scalars/rho-infinitesimal",
        )
