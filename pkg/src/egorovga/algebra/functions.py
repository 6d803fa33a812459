"""Standard functions: the smooth leaves of generalized functions and the densities of distributions.

Every function acts on point arrays of shape ``(n, dim)`` and returns ``n`` values.
Polynomials are kept symbolic with exact coefficients; everything else is a numpy
callable with closed-form derivatives where they exist.
"""

import math
import numbers
from abc import ABC, abstractmethod
from functools import lru_cache
from itertools import product as cartesian_product
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial as NumpyPolynomial

from ..core.exceptions import DimensionMismatchError, UnsupportedTermError

MultiIndex = Tuple[int, ...]
Breakpoints = Tuple[Tuple[float, ...], ...]

BUMP_EDGE = 1.0 - 1e-12


def normalize_multi_index(alpha, dim: int) -> MultiIndex:
    if isinstance(alpha, numbers.Integral):
        alpha = (int(alpha),) if dim == 1 else None
        if alpha is None:
            raise DimensionMismatchError("A bare integer order is only accepted in one dimension")
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != dim:
        raise DimensionMismatchError(f"Multi-index {alpha} does not match dimension {dim}")
    if any(a < 0 for a in alpha):
        raise ValueError(f"Multi-index entries must be non-negative, got {alpha}")
    return alpha


def multi_index_leq(beta: MultiIndex) -> List[MultiIndex]:
    """All multi-indices gamma with gamma <= beta componentwise."""
    return [tuple(gamma) for gamma in cartesian_product(*(range(b + 1) for b in beta))]


def multi_binomial(alpha: MultiIndex, beta: MultiIndex) -> int:
    return math.prod(math.comb(a, b) for a, b in zip(alpha, beta))


def unit_index(axis: int, dim: int) -> MultiIndex:
    return tuple(1 if i == axis else 0 for i in range(dim))


def as_points(points, dim: int) -> np.ndarray:
    array = np.asarray(points, dtype=float)
    if array.ndim == 1:
        array = array[:, None] if dim == 1 else array[None, :]
    if array.shape[1] != dim:
        raise DimensionMismatchError(f"Expected points with {dim} coordinates, got {array.shape[1]}")
    return array


# -- the bump w(t) = exp(-1/(1-t^2)) and its derivatives -----------------------------------


@lru_cache(maxsize=None)
def bump_numerator(order: int) -> NumpyPolynomial:
    """N_k with w^(k)(t) = w(t) * N_k(t) / (1 - t^2)^(2k)."""
    if order == 0:
        return NumpyPolynomial([1.0])
    previous = bump_numerator(order - 1)
    k = order - 1
    t = NumpyPolynomial([0.0, 1.0])
    one_minus = NumpyPolynomial([1.0, 0.0, -1.0])
    return previous.deriv() * one_minus**2 + 4 * k * t * one_minus * previous - 2 * t * previous


def bump_derivative(t, order: int = 0) -> np.ndarray:
    """Evaluated in the log domain; exactly 0 for |t| >= 1 - 1e-12."""
    t = np.asarray(t, dtype=float)
    values = np.zeros_like(t)
    inside = np.abs(t) < BUMP_EDGE
    if not np.any(inside):
        return values
    ti = t[inside]
    gap = 1.0 - ti * ti
    log_factor = -1.0 / gap - 2 * order * np.log(gap)
    values[inside] = bump_numerator(order)(ti) * np.exp(log_factor)
    return values


# -- base class ---------------------------------------------------------------------------


class StandardFunction(ABC):

    def __init__(self, dim: int, name: str):
        self.dim = dim
        self.name = name

    def __call__(self, points) -> np.ndarray:
        return self._evaluate(as_points(points, self.dim))

    @abstractmethod
    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        pass

    @property
    def is_smooth(self) -> bool:
        return True

    @property
    def breakpoints(self) -> Breakpoints:
        return tuple(() for _ in range(self.dim))

    def derivative(self, alpha) -> "StandardFunction":
        alpha = normalize_multi_index(alpha, self.dim)
        if not any(alpha):
            return self
        if not self.is_smooth:
            raise UnsupportedTermError(f"{self.name} has no classical derivative")
        return self._derivative(alpha)

    def _derivative(self, alpha: MultiIndex) -> "StandardFunction":
        raise UnsupportedTermError(f"No derivative rule for {self.name}")

    @abstractmethod
    def to_dict(self) -> dict:
        pass

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return LinearCombination(((other, self),))
        if isinstance(other, StandardFunction):
            return ProductFunction(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return LinearCombination(((other, self),))
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, StandardFunction):
            return LinearCombination(((1, self), (1, other)))
        if isinstance(other, numbers.Number):
            return LinearCombination(((1, self), (other, Polynomial.constant(1, self.dim))))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LinearCombination(((-1, self),))

    def __sub__(self, other):
        return self + (-1) * other

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


# -- exact polynomials --------------------------------------------------------------------


class Polynomial(StandardFunction):
    """Polynomial with exact coefficients keyed by multi-index exponent."""

    def __init__(self, coeffs: Dict[MultiIndex, numbers.Complex], dim: int):
        super().__init__(dim, "polynomial")
        cleaned = {}
        for exponent, coefficient in coeffs.items():
            exponent = normalize_multi_index(exponent, dim)
            if coefficient != 0:
                cleaned[exponent] = cleaned.get(exponent, 0) + coefficient
        self.coeffs = {k: v for k, v in sorted(cleaned.items()) if v != 0}

    @classmethod
    def univariate(cls, coefficients: Sequence[numbers.Complex]) -> "Polynomial":
        return cls({(k,): c for k, c in enumerate(coefficients)}, 1)

    @classmethod
    def monomial(cls, exponent, coefficient: numbers.Complex = 1, dim: Optional[int] = None) -> "Polynomial":
        if isinstance(exponent, numbers.Integral):
            exponent = (exponent,)
        dim = dim or len(exponent)
        return cls({tuple(exponent): coefficient}, dim)

    @classmethod
    def constant(cls, value: numbers.Complex, dim: int = 1) -> "Polynomial":
        return cls({(0,) * dim: value}, dim)

    @property
    def degree(self) -> int:
        return max((sum(exponent) for exponent in self.coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        values = np.zeros(points.shape[0], dtype=complex if self._is_complex else float)
        for exponent, coefficient in self.coeffs.items():
            values = values + _as_float(coefficient) * np.prod(points ** np.array(exponent), axis=1)
        return values

    @property
    def _is_complex(self) -> bool:
        return any(
            not isinstance(c, numbers.Real) and complex(c).imag != 0 for c in self.coeffs.values()
        )

    def _derivative(self, alpha: MultiIndex) -> "Polynomial":
        result = {}
        for exponent, coefficient in self.coeffs.items():
            if any(e < a for e, a in zip(exponent, alpha)):
                continue
            factor = math.prod(math.perm(e, a) for e, a in zip(exponent, alpha))
            reduced = tuple(e - a for e, a in zip(exponent, alpha))
            result[reduced] = result.get(reduced, 0) + factor * coefficient
        return Polynomial(result, self.dim)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise DimensionMismatchError("Polynomials of different dimensions")
            result: Dict[MultiIndex, numbers.Complex] = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    exponent = tuple(a + b for a, b in zip(e1, e2))
                    result[exponent] = result.get(exponent, 0) + c1 * c2
            return Polynomial(result, self.dim)
        if isinstance(other, numbers.Number):
            return Polynomial({e: c * other for e, c in self.coeffs.items()}, self.dim)
        return super().__mul__(other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self * other
        return super().__rmul__(other)

    def __add__(self, other):
        if isinstance(other, Polynomial):
            merged = dict(self.coeffs)
            for exponent, coefficient in other.coeffs.items():
                merged[exponent] = merged.get(exponent, 0) + coefficient
            return Polynomial(merged, self.dim)
        if isinstance(other, numbers.Number):
            return self + Polynomial.constant(other, self.dim)
        return super().__add__(other)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-1) * other

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "kind": "polynomial",
            "dim": self.dim,
            "coeffs": [
                [list(exponent), complex(c).real, complex(c).imag] for exponent, c in self.coeffs.items()
            ],
        }

    def __repr__(self) -> str:
        return f"Polynomial({self.coeffs})"


def _as_float(coefficient):
    if isinstance(coefficient, numbers.Real):
        return float(coefficient)
    return complex(coefficient)


# -- univariate building blocks -----------------------------------------------------------


class UnivariateSmooth(StandardFunction):
    """One-dimensional smooth function given by a family of derivative callables."""

    def __init__(
        self,
        name: str,
        derivative_of_order: Callable[[int], Callable[[np.ndarray], np.ndarray]],
        order: int = 0,
        catalogue: bool = False,
    ):
        super().__init__(1, name if order == 0 else f"{name}^({order})")
        self.base_name = name
        self.derivative_of_order = derivative_of_order
        self.order = order
        self.catalogue = catalogue

    @classmethod
    def from_derivatives(cls, name: str, derivatives: Sequence[Callable]) -> "UnivariateSmooth":
        """A smooth function known through an explicit list ``[f, f', f'', ...]``."""

        def of_order(order: int):
            if order >= len(derivatives):
                raise UnsupportedTermError(f"No derivative of order {order} supplied for {name}")
            return derivatives[order]

        return cls(name, of_order)

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.derivative_of_order(self.order)(points[:, 0]))

    def _derivative(self, alpha: MultiIndex) -> "UnivariateSmooth":
        return UnivariateSmooth(
            self.base_name, self.derivative_of_order, self.order + alpha[0], self.catalogue
        )

    def to_dict(self) -> dict:
        kind = "catalogue" if self.catalogue else "callable"
        return {"kind": kind, "name": self.base_name, "order": self.order}


class RoughUnivariate(StandardFunction):
    """Locally integrable or continuous function with known non-smooth points."""

    def __init__(self, name: str, fn: Callable[[np.ndarray], np.ndarray], kinks: Sequence[float]):
        super().__init__(1, name)
        self.fn = fn
        self.kinks = tuple(sorted(kinks))

    @property
    def is_smooth(self) -> bool:
        return False

    @property
    def breakpoints(self) -> Breakpoints:
        return (self.kinks,)

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(points[:, 0]), dtype=float)

    def to_dict(self) -> dict:
        return {"kind": "catalogue", "name": self.name, "order": 0}


class TensorProduct(StandardFunction):
    """prod_i f_i(x_i) for one-dimensional factors."""

    def __init__(self, factors: Sequence[StandardFunction]):
        factors = tuple(factors)
        if any(factor.dim != 1 for factor in factors):
            raise DimensionMismatchError("Tensor factors must be one-dimensional")
        super().__init__(len(factors), " x ".join(factor.name for factor in factors))
        self.factors = factors

    @property
    def is_smooth(self) -> bool:
        return all(factor.is_smooth for factor in self.factors)

    @property
    def breakpoints(self) -> Breakpoints:
        return tuple(factor.breakpoints[0] for factor in self.factors)

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        values = np.ones(points.shape[0])
        for axis, factor in enumerate(self.factors):
            values = values * factor(points[:, axis : axis + 1])
        return values

    def derivative(self, alpha) -> StandardFunction:
        alpha = normalize_multi_index(alpha, self.dim)
        if not any(alpha):
            return self
        return TensorProduct(factor.derivative((a,)) for factor, a in zip(self.factors, alpha))

    def to_dict(self) -> dict:
        return {"kind": "tensor", "factors": [factor.to_dict() for factor in self.factors]}


# -- combinations -------------------------------------------------------------------------


class LinearCombination(StandardFunction):

    def __init__(self, terms: Sequence[Tuple[numbers.Complex, StandardFunction]]):
        terms = tuple((c, f) for c, f in terms if c != 0)
        dims = {f.dim for _, f in terms}
        if len(dims) > 1:
            raise DimensionMismatchError("Cannot combine functions of different dimensions")
        dim = dims.pop() if dims else 1
        super().__init__(dim, " + ".join(f"{c}*{f.name}" for c, f in terms) or "0")
        self.terms = terms

    @property
    def is_smooth(self) -> bool:
        return all(f.is_smooth for _, f in self.terms)

    @property
    def breakpoints(self) -> Breakpoints:
        return _merge_breakpoints([f for _, f in self.terms], self.dim)

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        values = np.zeros(points.shape[0])
        for coefficient, function in self.terms:
            values = values + _as_float(coefficient) * function(points)
        return values

    def _derivative(self, alpha: MultiIndex) -> StandardFunction:
        return LinearCombination(tuple((c, f.derivative(alpha)) for c, f in self.terms))

    def to_dict(self) -> dict:
        return {
            "kind": "sum",
            "terms": [[complex(c).real, complex(c).imag, f.to_dict()] for c, f in self.terms],
        }


class ProductFunction(StandardFunction):

    def __init__(self, left: StandardFunction, right: StandardFunction):
        if left.dim != right.dim:
            raise DimensionMismatchError("Cannot multiply functions of different dimensions")
        super().__init__(left.dim, f"({left.name})*({right.name})")
        self.left = left
        self.right = right

    @property
    def is_smooth(self) -> bool:
        return self.left.is_smooth and self.right.is_smooth

    @property
    def breakpoints(self) -> Breakpoints:
        return _merge_breakpoints([self.left, self.right], self.dim)

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.left(points) * self.right(points)

    def _derivative(self, alpha: MultiIndex) -> StandardFunction:
        terms = []
        for beta in multi_index_leq(alpha):
            rest = tuple(a - b for a, b in zip(alpha, beta))
            terms.append(
                (multi_binomial(alpha, beta), ProductFunction(self.left.derivative(beta), self.right.derivative(rest)))
            )
        return LinearCombination(terms)

    def to_dict(self) -> dict:
        return {"kind": "product", "left": self.left.to_dict(), "right": self.right.to_dict()}


class AffinePullback(StandardFunction):
    """x -> f(M x + c) for an invertible matrix M."""

    def __init__(self, function: StandardFunction, matrix, shift):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        shift = np.atleast_1d(np.asarray(shift, dtype=float))
        if matrix.shape != (function.dim, function.dim) or shift.shape != (function.dim,):
            raise DimensionMismatchError("Affine map does not match the function dimension")
        super().__init__(function.dim, f"{function.name}(affine)")
        self.function = function
        self.matrix = matrix
        self.shift = shift

    @property
    def is_smooth(self) -> bool:
        return self.function.is_smooth

    @property
    def breakpoints(self) -> Breakpoints:
        # only exact for diagonal maps; other maps keep no breakpoints
        if not np.allclose(self.matrix, np.diag(np.diag(self.matrix))):
            return tuple(() for _ in range(self.dim))
        inner = self.function.breakpoints
        return tuple(
            tuple(sorted((b - self.shift[i]) / self.matrix[i, i] for b in inner[i]))
            for i in range(self.dim)
        )

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.function(points @ self.matrix.T + self.shift)

    def _derivative(self, alpha: MultiIndex) -> StandardFunction:
        axis = next(i for i, a in enumerate(alpha) if a > 0)
        remaining = tuple(a - (1 if i == axis else 0) for i, a in enumerate(alpha))
        first = LinearCombination(
            tuple(
                (
                    float(self.matrix[j, axis]),
                    AffinePullback(self.function.derivative(unit_index(j, self.dim)), self.matrix, self.shift),
                )
                for j in range(self.dim)
                if self.matrix[j, axis] != 0
            )
        )
        return first.derivative(remaining)

    def to_dict(self) -> dict:
        return {
            "kind": "affine",
            "function": self.function.to_dict(),
            "matrix": self.matrix.tolist(),
            "shift": self.shift.tolist(),
        }


class MappedFunction(StandardFunction):
    """x -> f(g(x)) for a general callable map; values only."""

    def __init__(self, function: StandardFunction, mapping: Callable[[np.ndarray], np.ndarray], name: str):
        super().__init__(function.dim, f"{function.name}({name})")
        self.function = function
        self.mapping = mapping
        self.mapping_name = name

    @property
    def is_smooth(self) -> bool:
        return False

    def _evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.function(self.mapping(points))

    def to_dict(self) -> dict:
        return {"kind": "mapped", "function": self.function.to_dict(), "map": self.mapping_name}


def _merge_breakpoints(functions: Sequence[StandardFunction], dim: int) -> Breakpoints:
    merged = [set() for _ in range(dim)]
    for function in functions:
        for axis, points in enumerate(function.breakpoints):
            merged[axis].update(points)
    return tuple(tuple(sorted(points)) for points in merged)


# -- catalogue ----------------------------------------------------------------------------


def _sine_of_order(order: int):
    return lambda t: np.sin(t + order * np.pi / 2)


def _cosine_of_order(order: int):
    return lambda t: np.cos(t + order * np.pi / 2)


def _exponential_of_order(order: int):
    return np.exp


def _bump_of_order(order: int):
    return lambda t: bump_derivative(t, order)


def _heaviside(t: np.ndarray) -> np.ndarray:
    return np.where(t >= 0, 1.0, 0.0)


def _vanishing_core(t: np.ndarray) -> np.ndarray:
    return np.where(np.abs(t) > 0.5, (np.abs(t) - 0.5) ** 2, 0.0)


def _smooth_entry(name, family):
    return lambda: UnivariateSmooth(name, family, catalogue=True)


CATALOGUE: Dict[str, Callable[[], StandardFunction]] = {
    "sin": _smooth_entry("sin", _sine_of_order),
    "cos": _smooth_entry("cos", _cosine_of_order),
    "exp": _smooth_entry("exp", _exponential_of_order),
    "bump": _smooth_entry("bump", _bump_of_order),
    "heaviside": lambda: RoughUnivariate("heaviside", _heaviside, (0.0,)),
    "abs": lambda: RoughUnivariate("abs", np.abs, (0.0,)),
    "vanishing_core": lambda: RoughUnivariate("vanishing_core", _vanishing_core, (-0.5, 0.5)),
}


def catalogue_function(name: str, dim: int = 1) -> StandardFunction:
    """Named function; in ``dim > 1`` the tensor product of the one-dimensional profile."""
    if name not in CATALOGUE:
        raise KeyError(f"Unknown function '{name}'. Known: {sorted(CATALOGUE)}")
    if dim == 1:
        return CATALOGUE[name]()
    return TensorProduct([CATALOGUE[name]() for _ in range(dim)])


def function_from_dict(data: Union[dict, str], dim: int = 1) -> StandardFunction:
    """Inverse of ``to_dict`` for serializable functions; a bare string names a catalogue entry."""
    if isinstance(data, str):
        return catalogue_function(data, dim)
    kind = data["kind"]
    if kind == "catalogue":
        function = catalogue_function(data["name"], 1)
        order = int(data.get("order", 0))
        return function.derivative((order,)) if order else function
    if kind == "polynomial":
        return Polynomial(
            {tuple(e): (complex(re, im) if im else _integral_or_float(re)) for e, re, im in data["coeffs"]},
            int(data["dim"]),
        )
    if kind == "tensor":
        return TensorProduct(function_from_dict(factor) for factor in data["factors"])
    if kind == "sum":
        return LinearCombination(
            tuple((complex(re, im) if im else re, function_from_dict(f, dim)) for re, im, f in data["terms"])
        )
    if kind == "product":
        return ProductFunction(function_from_dict(data["left"], dim), function_from_dict(data["right"], dim))
    if kind == "affine":
        return AffinePullback(function_from_dict(data["function"], dim), data["matrix"], data["shift"])
    raise UnsupportedTermError(f"Cannot rebuild a function of kind '{kind}'")


def _integral_or_float(value: float):
    return int(value) if float(value).is_integer() else float(value)
