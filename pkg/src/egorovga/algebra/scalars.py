"""Truncated asymptotic series in the infinitesimal rho.

An ``AsymptoticScalar`` is a finite sum ``sum_k c_k * rho**e_k`` with rational
exponents and complex coefficients, known up to an absolute precision
``O(rho**truncation_order)``. ``truncation_order=None`` marks an exact value
(standard numbers and monomials built by hand), so mixing exact constants into a
computation never costs precision.
"""

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..core.exceptions import DivisionByZeroError, NotFiniteError, NotOrderedError

DEFAULT_TRUNCATION_ORDER = Fraction(8)

Term = Tuple[Fraction, numbers.Complex]
ScalarLike = Union["AsymptoticScalar", numbers.Complex]


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


class Magnitude(Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    FINITE = "finite_noninfinitesimal"
    INFINITE = "infinite"


def _as_exponent(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    return Fraction(value)


def _precision_min(*orders: Optional[Fraction]) -> Optional[Fraction]:
    finite = [order for order in orders if order is not None]
    return min(finite) if finite else None


def _shift(order: Optional[Fraction], by: Optional[Fraction]) -> Optional[Fraction]:
    if order is None or by is None:
        return None
    return order + by


def _multiply_terms(
    left: Sequence[Term], right: Sequence[Term], limit: Optional[Fraction]
) -> Dict[Fraction, numbers.Complex]:
    product: Dict[Fraction, numbers.Complex] = {}
    for exponent_a, coeff_a in left:
        for exponent_b, coeff_b in right:
            exponent = exponent_a + exponent_b
            if limit is not None and exponent >= limit:
                # right is sorted, later terms only get larger
                break
            product[exponent] = product.get(exponent, 0) + coeff_a * coeff_b
    return product


@dataclass(frozen=True, eq=False)
class AsymptoticScalar:
    terms: Tuple[Term, ...] = ()
    truncation_order: Optional[Fraction] = DEFAULT_TRUNCATION_ORDER
    truncated: bool = False

    def __post_init__(self):
        order = None if self.truncation_order is None else _as_exponent(self.truncation_order)
        merged: Dict[Fraction, numbers.Complex] = {}
        for exponent, coefficient in self.terms:
            exponent = _as_exponent(exponent)
            merged[exponent] = merged.get(exponent, 0) + coefficient

        kept: List[Term] = []
        dropped = self.truncated
        for exponent in sorted(merged):
            coefficient = merged[exponent]
            if coefficient == 0:
                continue
            if order is not None and exponent >= order:
                dropped = True
                continue
            kept.append((exponent, coefficient))

        object.__setattr__(self, "terms", tuple(kept))
        object.__setattr__(self, "truncation_order", order)
        object.__setattr__(self, "truncated", dropped)

    # -- constructors -------------------------------------------------------------------

    @classmethod
    def constant(cls, value: numbers.Complex) -> "AsymptoticScalar":
        return cls(((Fraction(0), value),), truncation_order=None)

    @classmethod
    def monomial(
        cls, exponent=1, coefficient: numbers.Complex = 1, truncation_order=None
    ) -> "AsymptoticScalar":
        return cls(((_as_exponent(exponent), coefficient),), truncation_order=truncation_order)

    @classmethod
    def zero(cls) -> "AsymptoticScalar":
        return cls((), truncation_order=None)

    @classmethod
    def one(cls) -> "AsymptoticScalar":
        return cls.constant(1)

    @classmethod
    def coerce(cls, value: ScalarLike) -> "AsymptoticScalar":
        if isinstance(value, AsymptoticScalar):
            return value
        if isinstance(value, numbers.Complex):
            return cls.constant(value)
        raise TypeError(f"Cannot interpret {type(value).__name__} as an asymptotic scalar")

    # -- inspection ---------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_real(self) -> bool:
        return all(
            isinstance(coefficient, numbers.Real) or coefficient.imag == 0
            for _, coefficient in self.terms
        )

    @property
    def valuation(self) -> Optional[Fraction]:
        """Smallest exponent present, ``None`` for zero."""
        return self.terms[0][0] if self.terms else None

    @property
    def leading_coefficient(self) -> numbers.Complex:
        return self.terms[0][1] if self.terms else 0

    def coefficient(self, exponent) -> numbers.Complex:
        exponent = _as_exponent(exponent)
        for term_exponent, coefficient in self.terms:
            if term_exponent == exponent:
                return coefficient
        return 0

    def evaluate(self, rho: float) -> complex:
        """Numeric value of the series at a concrete rho."""
        return sum(
            (complex(coefficient) * rho ** float(exponent) for exponent, coefficient in self.terms),
            0j,
        )

    # -- arithmetic ---------------------------------------------------------------------

    def __add__(self, other):
        try:
            return scalar_add(self, other)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return AsymptoticScalar(
            tuple((exponent, -coefficient) for exponent, coefficient in self.terms),
            self.truncation_order,
            self.truncated,
        )

    def __sub__(self, other):
        try:
            return scalar_add(self, -AsymptoticScalar.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return AsymptoticScalar.coerce(other) - self

    def __mul__(self, other):
        try:
            return scalar_mul(self, other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        return scalar_mul(self, scalar_inv(AsymptoticScalar.coerce(other)))

    def __rtruediv__(self, other):
        return scalar_mul(AsymptoticScalar.coerce(other), scalar_inv(self))

    def __pow__(self, power: int):
        if not isinstance(power, int):
            raise TypeError("Only integer powers are supported; use root() for n-th roots")
        if power < 0:
            return scalar_inv(self) ** (-power)
        result = AsymptoticScalar.one()
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def conjugate(self) -> "AsymptoticScalar":
        return AsymptoticScalar(
            tuple((exponent, coefficient.conjugate()) for exponent, coefficient in self.terms),
            self.truncation_order,
            self.truncated,
        )

    def root(self, n: int) -> "AsymptoticScalar":
        """Leading-order n-th root of a real, positive scalar via the binomial series."""
        if n < 1:
            raise ValueError("Root order must be a positive integer")
        if self.is_zero:
            return AsymptoticScalar.zero()
        if not self.is_real or self.leading_coefficient.real <= 0:
            raise NotOrderedError("n-th roots are only taken of real positive scalars")

        lead_exponent = self.valuation
        lead = self.leading_coefficient.real
        ratio = [(exponent - lead_exponent, coefficient / lead) for exponent, coefficient in self.terms[1:]]
        relative_order = _relative_precision(self)
        if relative_order is None:
            relative_order = DEFAULT_TRUNCATION_ORDER

        series: Dict[Fraction, numbers.Complex] = {Fraction(0): 1}
        power: Dict[Fraction, numbers.Complex] = {Fraction(0): 1}
        binomial = 1.0
        exponent_power = Fraction(1, n)
        k = 0
        while ratio:
            k += 1
            binomial *= float(exponent_power - (k - 1)) / k
            power = _multiply_terms(sorted(power.items()), ratio, relative_order)
            if not power:
                break
            for exponent, coefficient in power.items():
                series[exponent] = series.get(exponent, 0) + binomial * coefficient

        scale = math.pow(float(lead), 1.0 / n)
        root_exponent = lead_exponent / n
        order = relative_order + root_exponent if len(self.terms) > 1 else None
        if order is None and self.truncation_order is not None:
            order = relative_order + root_exponent
        return AsymptoticScalar(
            tuple((exponent + root_exponent, scale * coefficient) for exponent, coefficient in series.items()),
            order,
        )

    # -- comparisons --------------------------------------------------------------------

    def __eq__(self, other):
        try:
            other = AsymptoticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        limit = _precision_min(self.truncation_order, other.truncation_order)
        mine = {e: c for e, c in self.terms if limit is None or e < limit}
        theirs = {e: c for e, c in other.terms if limit is None or e < limit}
        return mine == theirs

    __hash__ = None

    def __lt__(self, other):
        return scalar_cmp(self, other) is Ordering.LT

    def __le__(self, other):
        return scalar_cmp(self, other) is not Ordering.GT

    def __gt__(self, other):
        return scalar_cmp(self, other) is Ordering.GT

    def __ge__(self, other):
        return scalar_cmp(self, other) is not Ordering.LT

    def isclose(self, other: ScalarLike, rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> bool:
        other = AsymptoticScalar.coerce(other)
        limit = _precision_min(self.truncation_order, other.truncation_order)
        exponents = {e for e, _ in self.terms} | {e for e, _ in other.terms}
        for exponent in exponents:
            if limit is not None and exponent >= limit:
                continue
            a = complex(self.coefficient(exponent))
            b = complex(other.coefficient(exponent))
            if abs(a - b) > max(rel_tol * max(abs(a), abs(b)), abs_tol):
                return False
        return True

    # -- serialization ------------------------------------------------------------------

    def to_json(self) -> List[List[float]]:
        """Terms as ``[exponent_num, exponent_den, re, im]`` rows."""
        rows = []
        for exponent, coefficient in self.terms:
            value = complex(coefficient)
            rows.append([exponent.numerator, exponent.denominator, value.real, value.imag])
        return rows

    @classmethod
    def from_json(cls, rows: Iterable[Sequence[float]], truncation_order=DEFAULT_TRUNCATION_ORDER):
        terms = []
        for numerator, denominator, re, im in rows:
            coefficient = complex(re, im) if im else float(re)
            terms.append((Fraction(int(numerator), int(denominator)), coefficient))
        return cls(tuple(terms), truncation_order)

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for exponent, coefficient in self.terms:
                if exponent == 0:
                    parts.append(f"{coefficient}")
                else:
                    parts.append(f"{coefficient}*rho^{exponent}")
            body = " + ".join(parts)
        if self.truncation_order is not None:
            body += f" + O(rho^{self.truncation_order})"
        return f"AsymptoticScalar({body})"


def _relative_precision(value: AsymptoticScalar) -> Optional[Fraction]:
    if value.truncation_order is None:
        return None
    return value.truncation_order - value.valuation


RHO = AsymptoticScalar.monomial(1)


def scalar_add(a: ScalarLike, b: ScalarLike) -> AsymptoticScalar:
    a, b = AsymptoticScalar.coerce(a), AsymptoticScalar.coerce(b)
    order = _precision_min(a.truncation_order, b.truncation_order)
    return AsymptoticScalar(a.terms + b.terms, order, a.truncated or b.truncated)


def scalar_mul(a: ScalarLike, b: ScalarLike) -> AsymptoticScalar:
    a, b = AsymptoticScalar.coerce(a), AsymptoticScalar.coerce(b)
    if a.is_zero and b.is_zero:
        return AsymptoticScalar((), _precision_min(a.truncation_order, b.truncation_order))
    order = _precision_min(
        _shift(a.truncation_order, b.valuation), _shift(b.truncation_order, a.valuation)
    )
    product = _multiply_terms(a.terms, b.terms, order)
    return AsymptoticScalar(tuple(product.items()), order, a.truncated or b.truncated)


def scalar_inv(a: ScalarLike, default_order: Fraction = DEFAULT_TRUNCATION_ORDER) -> AsymptoticScalar:
    a = AsymptoticScalar.coerce(a)
    if a.is_zero:
        raise DivisionByZeroError("Cannot invert the zero scalar")

    lead_exponent, lead = a.valuation, a.leading_coefficient
    inverse_lead = Fraction(1) / lead if isinstance(lead, (int, Fraction)) else 1 / lead
    if len(a.terms) == 1:
        order = None if a.truncation_order is None else a.truncation_order - 2 * lead_exponent
        return AsymptoticScalar(((-lead_exponent, inverse_lead),), order)

    relative_order = _relative_precision(a)
    if relative_order is None:
        relative_order = _as_exponent(default_order)
    correction = [
        (exponent - lead_exponent, -coefficient * inverse_lead) for exponent, coefficient in a.terms[1:]
    ]

    series: Dict[Fraction, numbers.Complex] = {Fraction(0): 1}
    power: Dict[Fraction, numbers.Complex] = {Fraction(0): 1}
    while True:
        power = _multiply_terms(sorted(power.items()), correction, relative_order)
        if not power:
            break
        for exponent, coefficient in power.items():
            series[exponent] = series.get(exponent, 0) + coefficient

    return AsymptoticScalar(
        tuple((exponent - lead_exponent, coefficient * inverse_lead) for exponent, coefficient in series.items()),
        relative_order - lead_exponent,
        True,
    )


def scalar_cmp(a: ScalarLike, b: ScalarLike) -> Ordering:
    a, b = AsymptoticScalar.coerce(a), AsymptoticScalar.coerce(b)
    if not (a.is_real and b.is_real):
        raise NotOrderedError("Complex scalars are not ordered")
    difference = scalar_add(a, -b)
    if difference.is_zero:
        return Ordering.EQ
    lead = difference.leading_coefficient
    lead = lead if isinstance(lead, numbers.Real) else lead.real
    return Ordering.GT if lead > 0 else Ordering.LT


def standard_part(a: ScalarLike) -> complex:
    a = AsymptoticScalar.coerce(a)
    if a.terms and a.valuation < 0:
        raise NotFiniteError(f"Scalar {a!r} is infinitely large and has no standard part")
    return complex(a.coefficient(0))


def classify(a: ScalarLike) -> Magnitude:
    a = AsymptoticScalar.coerce(a)
    if a.is_zero:
        return Magnitude.ZERO
    if a.valuation > 0:
        return Magnitude.INFINITESIMAL
    if a.valuation == 0:
        return Magnitude.FINITE
    return Magnitude.INFINITE
