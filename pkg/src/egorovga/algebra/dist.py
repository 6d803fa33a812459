"""Schwartz distributions as finite sums of ``coeff * d^alpha(base)`` terms.

Bases are densities (a standard function with a declared regularity class) or point
masses. The embedding ``iota`` multiplies the regularisation ``T * Delta_rho`` by the
cutoff of the domain.
"""

import numbers
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from .domain import Domain
from .functions import (
    AffinePullback,
    MappedFunction,
    MultiIndex,
    Polynomial,
    StandardFunction,
    catalogue_function,
    function_from_dict,
    multi_binomial,
    multi_index_leq,
    normalize_multi_index,
)
from .genfun import (
    CutoffNode,
    ConvolutionNode,
    GenFunc,
    KernelNode,
    PushforwardNode,
    make_product,
    make_scalar_mul,
    make_sum,
)
from .maps import Diffeomorphism
from .mollifier import Kernel
from .scalars import AsymptoticScalar
from ..core.exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyDomainError,
    NotSubdomainError,
    OutsideDomainError,
    UnsupportedTermError,
)


class DensityClass(Enum):
    CONTINUOUS = "continuous"
    SMOOTH = "smooth"
    LOCALLY_INTEGRABLE = "locally_integrable"
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True, eq=False)
class Density:
    function: StandardFunction
    density_class: DensityClass

    def __post_init__(self):
        if self.density_class is DensityClass.POLYNOMIAL and not isinstance(self.function, Polynomial):
            raise UnsupportedTermError("Polynomial densities need exact coefficients")
        if self.density_class in (DensityClass.SMOOTH, DensityClass.POLYNOMIAL) and not self.function.is_smooth:
            raise UnsupportedTermError(f"{self.function.name} is not smooth")


@dataclass(frozen=True)
class PointMass:
    location: Tuple[float, ...]


Base = Union[Density, PointMass]


@dataclass(frozen=True, eq=False)
class Term:
    coeff: numbers.Complex
    alpha: MultiIndex
    base: Base


@dataclass(frozen=True, eq=False)
class Distribution:
    domain: Domain
    terms: Tuple[Term, ...] = field(default=())

    def __post_init__(self):
        terms = []
        for term in self.terms:
            if term.coeff == 0:
                continue
            alpha = normalize_multi_index(term.alpha, self.domain.dim)
            base = term.base
            if isinstance(base, PointMass):
                if len(base.location) != self.domain.dim:
                    raise DimensionMismatchError("Point mass location has the wrong dimension")
                if not self.domain.contains(base.location):
                    raise OutsideDomainError(f"Point mass at {base.location} lies outside the domain")
            elif base.function.dim != self.domain.dim:
                raise DimensionMismatchError("Density has the wrong dimension")
            terms.append(Term(term.coeff, alpha, base))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Distribution") -> "Distribution":
        if other.domain != self.domain:
            raise DomainError("Distributions live on different domains")
        return Distribution(self.domain, self.terms + other.terms)

    def __mul__(self, scalar: numbers.Complex) -> "Distribution":
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return Distribution(self.domain, tuple(Term(t.coeff * scalar, t.alpha, t.base) for t in self.terms))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-1) * other

    def to_dict(self) -> dict:
        return {"domain": self.domain.to_dict(), "terms": [_term_to_dict(term) for term in self.terms]}

    @classmethod
    def from_dict(cls, data: dict, domain: Optional[Domain] = None) -> "Distribution":
        domain = domain or Domain.from_dict(data["domain"])
        return cls(domain, tuple(_term_from_dict(item, domain.dim) for item in data.get("terms", ())))


def _coefficient_from_data(value) -> numbers.Complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1])
    return value


def _coefficient_to_data(value: numbers.Complex):
    value = complex(value)
    return value.real if value.imag == 0 else [value.real, value.imag]


def _term_to_dict(term: Term) -> dict:
    data = {"coeff": _coefficient_to_data(term.coeff), "alpha": list(term.alpha)}
    if isinstance(term.base, PointMass):
        data.update(kind="point_mass", location=list(term.base.location))
    else:
        data.update(
            kind="density",
            function=term.base.function.to_dict(),
            **{"class": term.base.density_class.value},
        )
    return data


def _term_from_dict(data: dict, dim: int) -> Term:
    coeff = _coefficient_from_data(data.get("coeff", 1))
    alpha = tuple(data.get("alpha", (0,) * dim))
    kind = data.get("kind", "density")
    if kind == "point_mass":
        return Term(coeff, alpha, PointMass(tuple(float(x) for x in data.get("location", (0.0,) * dim))))
    if kind == "density":
        function = function_from_dict(data["function"], dim)
        density_class = DensityClass(data.get("class", "smooth" if function.is_smooth else "locally_integrable"))
        return Term(coeff, alpha, Density(function, density_class))
    raise UnsupportedTermError(f"Unknown term kind '{kind}'")


# -- constructors -----------------------------------------------------------------------------


def schwartz_embed(f: StandardFunction, density_class: Union[DensityClass, str], dom: Domain) -> Distribution:
    density_class = DensityClass(density_class) if isinstance(density_class, str) else density_class
    return Distribution(dom, (Term(1, (0,) * dom.dim, Density(f, density_class)),))


def dirac(dom: Domain, location: Optional[Sequence[float]] = None, alpha=None, coeff: numbers.Complex = 1) -> Distribution:
    location = tuple(float(x) for x in location) if location is not None else (0.0,) * dom.dim
    alpha = alpha if alpha is not None else (0,) * dom.dim
    return Distribution(dom, (Term(coeff, normalize_multi_index(alpha, dom.dim), PointMass(location)),))


def named_distribution(name: str, dom: Domain) -> Distribution:
    """Catalogue shorthands: ``delta``, ``d_delta``, or a function name embedded as a density."""
    if name == "delta":
        return dirac(dom)
    if name == "d_delta":
        return dirac(dom, alpha=(1,) + (0,) * (dom.dim - 1))
    function = catalogue_function(name, dom.dim)
    density_class = DensityClass.SMOOTH if function.is_smooth else DensityClass.LOCALLY_INTEGRABLE
    return schwartz_embed(function, density_class, dom)


# -- classical operations -----------------------------------------------------------------------


def distr_derive(T: Distribution, alpha) -> Distribution:
    alpha = normalize_multi_index(alpha, T.dim)
    return Distribution(
        T.domain,
        tuple(Term(t.coeff, tuple(a + b for a, b in zip(t.alpha, alpha)), t.base) for t in T.terms),
    )


def _product_class(f: StandardFunction, density: Density) -> DensityClass:
    if density.density_class is DensityClass.POLYNOMIAL and isinstance(f, Polynomial):
        return DensityClass.POLYNOMIAL
    if density.density_class is DensityClass.POLYNOMIAL:
        return DensityClass.SMOOTH
    return density.density_class


def distr_mul_smooth(f: StandardFunction, T: Distribution) -> Distribution:
    """f * d^alpha(base) = sum_beta (-1)^|beta| C(alpha, beta) d^(alpha-beta)((d^beta f) * base)."""
    if not f.is_smooth:
        raise UnsupportedTermError(f"{f.name} is not smooth")
    if f.dim != T.dim:
        raise DimensionMismatchError("Multiplier and distribution have different dimensions")

    terms: List[Term] = []
    for term in T.terms:
        for beta in multi_index_leq(term.alpha):
            rest = tuple(a - b for a, b in zip(term.alpha, beta))
            sign = (-1) ** sum(beta) * multi_binomial(term.alpha, beta)
            derivative = f.derivative(beta)
            if isinstance(term.base, PointMass):
                value = complex(np.asarray(derivative(np.array([term.base.location])))[0])
                value = value.real if value.imag == 0 else value
                coeff = term.coeff * sign * value
                if coeff != 0:
                    terms.append(Term(coeff, rest, term.base))
            else:
                density = term.base
                product = derivative * density.function
                if isinstance(product, Polynomial) and product.is_zero:
                    continue
                terms.append(Term(term.coeff * sign, rest, Density(product, _product_class(derivative, density))))
    return Distribution(T.domain, tuple(terms))


def restrict_distribution(T: Distribution, sub: Domain) -> Distribution:
    """Domain replacement; point masses outside ``sub`` are dropped."""
    if sub.is_empty:
        raise EmptyDomainError("Cannot restrict to an empty domain")
    if not sub.is_subdomain_of(T.domain):
        raise NotSubdomainError(f"{sub.boxes} is not contained in {T.domain.boxes}")
    kept = tuple(
        term for term in T.terms if not isinstance(term.base, PointMass) or sub.contains(term.base.location)
    )
    return Distribution(sub, kept)


# -- regularisation and embedding ------------------------------------------------------------------


def convolve_delta(T: Distribution, k: Kernel) -> GenFunc:
    nodes = []
    for term in T.terms:
        if isinstance(term.base, PointMass):
            node = KernelNode(k, term.base.location, term.alpha)
        else:
            node = ConvolutionNode(k, term.base.function, term.alpha)
        nodes.append(make_scalar_mul(AsymptoticScalar.constant(term.coeff), node))
    return GenFunc(T.domain, make_sum(nodes))


def iota_embed(T: Distribution, k: Kernel) -> GenFunc:
    regularised = convolve_delta(T, k)
    return GenFunc(T.domain, make_product(CutoffNode(k, T.domain, (0,) * T.dim), regularised.node))


# -- change of variables -----------------------------------------------------------------------------


def _transport_derivative(alpha: MultiIndex, linear: np.ndarray) -> Dict[MultiIndex, float]:
    """Expand prod_i (sum_j A_ji d_j)^alpha_i into multi-index coefficients."""
    dim = len(alpha)
    expansion: Dict[MultiIndex, float] = {(0,) * dim: 1.0}
    for i, order in enumerate(alpha):
        for _ in range(order):
            updated: Dict[MultiIndex, float] = {}
            for gamma, coefficient in expansion.items():
                for j in range(dim):
                    if linear[j, i] == 0:
                        continue
                    shifted = tuple(g + (1 if axis == j else 0) for axis, g in enumerate(gamma))
                    updated[shifted] = updated.get(shifted, 0.0) + coefficient * linear[j, i]
            expansion = updated
    return expansion


def change_of_variables_dist(T: Distribution, theta: Diffeomorphism, target: Domain) -> Distribution:
    """T(theta) with the convention <T(theta), phi> = <T, (phi o theta) |det D theta|>."""
    if theta.dim != T.dim or target.dim != T.dim:
        raise DimensionMismatchError("Map, distribution and target have different dimensions")

    terms: List[Term] = []
    for term in T.terms:
        if any(term.alpha) and not theta.is_affine:
            raise UnsupportedTermError(
                f"Derivative terms can only be transported by affine maps, not {theta.name}"
            )
        if isinstance(term.base, PointMass):
            location = np.array(term.base.location)
            determinant = abs(float(theta.jacobian_det(location[None, :])[0]))
            base = PointMass(tuple(float(x) for x in theta.map_point(location)))
            scale = determinant
        elif theta.is_affine:
            inverse = theta.inverse_linear
            pulled = AffinePullback(term.base.function, inverse, -inverse @ theta.offset)
            density_class = term.base.density_class
            if density_class is DensityClass.POLYNOMIAL:
                density_class = DensityClass.SMOOTH
            base = Density(pulled, density_class)
            scale = 1.0
        else:
            pulled = MappedFunction(term.base.function, theta.inverse, f"{theta.name}^-1")
            base = Density(pulled, DensityClass.CONTINUOUS if term.base.function.is_smooth else term.base.density_class)
            scale = 1.0

        if any(term.alpha):
            for gamma, coefficient in _transport_derivative(term.alpha, theta.linear).items():
                terms.append(Term(term.coeff * scale * coefficient, gamma, base))
        else:
            terms.append(Term(term.coeff * scale, term.alpha, base))
    return Distribution(target, tuple(terms))


def pushforward_genfunc(f: GenFunc, theta: Diffeomorphism, target: Domain) -> GenFunc:
    if theta.dim != f.dim or target.dim != f.dim:
        raise DimensionMismatchError("Map, generalized function and target have different dimensions")
    return GenFunc(target, PushforwardNode(f.node, theta))


# -- classical pairing -----------------------------------------------------------------------------


def distr_pair(T: Distribution, phi, epsabs: float = 1e-13, epsrel: float = 1e-12) -> complex:
    """<T, phi> computed classically: adaptive quadrature for densities, derivatives of phi for point masses."""
    total = 0j
    for term in T.terms:
        sign = (-1) ** sum(term.alpha)
        derivative = phi.function.derivative(term.alpha)
        if isinstance(term.base, PointMass):
            value = complex(np.asarray(derivative(np.array([term.base.location])))[0])
        else:
            value = _integrate_product(term.base.function, derivative, phi.support, epsabs, epsrel)
        total += term.coeff * sign * value
    return total


def _integrate_product(
    density: StandardFunction, test: StandardFunction, support, epsabs: float, epsrel: float
) -> complex:
    dim = density.dim
    breaks = density.breakpoints

    def integrand(*coordinates) -> np.ndarray:
        point = np.array([coordinates])
        return complex(np.asarray(density(point))[0] * np.asarray(test(point))[0])

    def real_part(*coordinates):
        return integrand(*coordinates).real

    def imag_part(*coordinates):
        return integrand(*coordinates).imag

    options = [
        {
            "points": [b for b in breaks[axis] if support[axis][0] < b < support[axis][1]] or None,
            "epsabs": epsabs,
            "epsrel": epsrel,
            "limit": 200,
        }
        for axis in range(dim)
    ]
    ranges = [tuple(interval) for interval in support]
    if dim == 1:
        options = options[0]
        re, _ = integrate.quad(real_part, *ranges[0], **options)
        im, _ = integrate.quad(imag_part, *ranges[0], **options)
    else:
        # nquad takes the innermost variable first
        re, _ = integrate.nquad(real_part, ranges, opts=options)
        im, _ = integrate.nquad(imag_part, ranges, opts=options)
    return complex(re, im)
