"""Generalized functions as expression trees evaluable at (point, rho).

A :class:`GenFunc` pairs a domain with an immutable tree of :class:`Node` objects.
Equality in the algebra is exact vanishing of the difference at near-standard points
for every tested rho (:func:`equals_on_monad`); association lives in ``weak``.
"""

import math
import numbers
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .domain import (
    Box,
    Domain,
    NearStandardPoint,
    grid_cells,
    rho_threshold,
    shrink_clip,
)
from .functions import (
    MultiIndex,
    Polynomial,
    StandardFunction,
    UnivariateSmooth,
    multi_binomial,
    multi_index_leq,
    normalize_multi_index,
    unit_index,
)
from .maps import Diffeomorphism
from .mollifier import Kernel, cutoff_eval, kernel_eval, kernel_factor_local
from .quadrature import DEFAULT_NODES_PER_AXIS, local_convolution
from .scalars import AsymptoticScalar, ScalarLike
from ..core.exceptions import (
    DomainError,
    EmptyDomainError,
    NotSubdomainError,
    OutsideDomainError,
    UnsupportedTermError,
)
from ..utils.logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)


@dataclass(frozen=True)
class EvalContext:
    rho: float
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS
    local_substitution: bool = True
    tol: float = 1e-9
    rho_max: float = 0.5

    def __post_init__(self):
        if not (0.0 < self.rho <= self.rho_max):
            raise DomainError(f"rho must lie in (0, {self.rho_max}], got {self.rho}")

    def with_rho(self, rho: float) -> "EvalContext":
        return EvalContext(rho, self.nodes_per_axis, self.local_substitution, self.tol, self.rho_max)

    @classmethod
    def from_config(cls, config, rho: float) -> "EvalContext":
        return cls(
            rho=rho,
            nodes_per_axis=config.quadrature.nodes_per_axis,
            local_substitution=config.quadrature.local_substitution,
            tol=config.tolerances.monad,
            rho_max=config.grid.rho_max,
        )


# -- nodes --------------------------------------------------------------------------------


class Node(ABC):
    kind = "node"

    @abstractmethod
    def evaluate(self, points: np.ndarray, ctx: EvalContext) -> np.ndarray:
        pass

    @abstractmethod
    def derive(self, alpha: MultiIndex) -> "Node":
        pass

    def children(self) -> Tuple["Node", ...]:
        return ()

    def landmarks(self) -> List[Tuple[float, ...]]:
        points = []
        for child in self.children():
            points.extend(child.landmarks())
        return points

    def breaks(self, rho: float, dim: int) -> List[set]:
        merged = [set() for _ in range(dim)]
        for child in self.children():
            for axis, values in enumerate(child.breaks(rho, dim)):
                merged[axis].update(values)
        return merged

    def singular_order(self, dim: int) -> int:
        """Exponent n such that the node grows at most like rho^-n where it is largest."""
        return max((child.singular_order(dim) for child in self.children()), default=0)

    @abstractmethod
    def to_dict(self) -> dict:
        pass


class SmoothLeaf(Node):
    kind = "smooth"

    def __init__(self, function: StandardFunction):
        self.function = function

    def evaluate(self, points, ctx):
        return np.asarray(self.function(points), dtype=complex)

    def derive(self, alpha):
        return SmoothLeaf(self.function.derivative(alpha))

    def breaks(self, rho, dim):
        return [set(axis) for axis in self.function.breakpoints]

    def to_dict(self):
        return {"kind": self.kind, "function": self.function.to_dict()}


class ScalarLeaf(Node):
    kind = "scalar"

    def __init__(self, value: AsymptoticScalar):
        self.value = value

    def evaluate(self, points, ctx):
        return np.full(points.shape[0], self.value.evaluate(ctx.rho), dtype=complex)

    def derive(self, alpha):
        if any(alpha):
            return ZERO
        return self

    def singular_order(self, dim):
        valuation = self.value.valuation
        return 0 if valuation is None or valuation >= 0 else math.ceil(-valuation)

    def to_dict(self):
        return {"kind": self.kind, "value": self.value.to_json()}


ZERO = ScalarLeaf(AsymptoticScalar.zero())


class KernelNode(Node):
    """d^alpha Delta_rho(x - center)."""

    kind = "kernel"

    def __init__(self, kernel: Kernel, center: Sequence[float], alpha: MultiIndex):
        self.kernel = kernel
        self.center = tuple(float(c) for c in center)
        self.alpha = tuple(alpha)

    def evaluate(self, points, ctx):
        return kernel_eval(self.kernel, self.alpha, points - np.array(self.center), ctx.rho).astype(complex)

    def derive(self, alpha):
        return KernelNode(self.kernel, self.center, tuple(a + b for a, b in zip(self.alpha, alpha)))

    def landmarks(self):
        return [self.center]

    def breaks(self, rho, dim):
        return [{c - rho, c, c + rho} for c in self.center]

    def singular_order(self, dim):
        return dim + sum(self.alpha)

    def to_dict(self):
        return {"kind": self.kind, "m": self.kernel.m, "center": list(self.center), "alpha": list(self.alpha)}


class CutoffNode(Node):
    """d^alpha Pi_Omega for the domain the cutoff was built on."""

    kind = "cutoff"

    def __init__(self, kernel: Kernel, domain: Domain, alpha: MultiIndex):
        self.kernel = kernel
        self.domain = domain
        self.alpha = tuple(alpha)

    def evaluate(self, points, ctx):
        return cutoff_eval(self.kernel, self.domain, points, ctx.rho, self.alpha).astype(complex)

    def derive(self, alpha):
        return CutoffNode(self.kernel, self.domain, tuple(a + b for a, b in zip(self.alpha, alpha)))

    def breaks(self, rho, dim):
        merged = [set() for _ in range(dim)]
        for box in shrink_clip(self.domain, 3 * rho).boxes:
            for axis, (lo, hi) in enumerate(box):
                merged[axis].update((lo - rho, lo + rho, hi - rho, hi + rho))
        return merged

    def singular_order(self, dim):
        return sum(self.alpha)

    def to_dict(self):
        return {"kind": self.kind, "m": self.kernel.m, "domain": self.domain.to_dict(), "alpha": list(self.alpha)}


class ConvolutionNode(Node):
    """density * d^alpha Delta_rho, integrated over the kernel box around each point."""

    kind = "convolution"

    def __init__(self, kernel: Kernel, density: StandardFunction, alpha: MultiIndex):
        self.kernel = kernel
        self.density = density
        self.alpha = tuple(alpha)

    def evaluate(self, points, ctx):
        density, alpha = self.density, self.alpha
        if any(alpha) and density.is_smooth:
            # f * d^a Delta = (d^a f) * Delta for smooth f
            density, alpha = density.derivative(alpha), (0,) * len(alpha)
        values = local_convolution(
            density,
            lambda u: kernel_factor_local(self.kernel, alpha, u),
            points,
            ctx.rho,
            density.breakpoints,
            ctx.nodes_per_axis,
            ctx.local_substitution,
        )
        return values.astype(complex) * ctx.rho ** (-sum(alpha))

    def derive(self, alpha):
        return ConvolutionNode(self.kernel, self.density, tuple(a + b for a, b in zip(self.alpha, alpha)))

    def landmarks(self):
        points = []
        for axis, values in enumerate(self.density.breakpoints):
            for b in values:
                point = [0.0] * self.density.dim
                point[axis] = float(b)
                points.append(tuple(point))
        return points

    def breaks(self, rho, dim):
        return [{b + shift for b in axis for shift in (-rho, 0.0, rho)} for axis in self.density.breakpoints]

    def singular_order(self, dim):
        return 0 if self.density.is_smooth else sum(self.alpha)

    def to_dict(self):
        return {
            "kind": self.kind,
            "m": self.kernel.m,
            "density": self.density.to_dict(),
            "alpha": list(self.alpha),
        }


class SumNode(Node):
    kind = "sum"

    def __init__(self, terms: Sequence[Node]):
        self.terms = tuple(terms)

    def children(self):
        return self.terms

    def evaluate(self, points, ctx):
        values = np.zeros(points.shape[0], dtype=complex)
        for term in self.terms:
            values = values + term.evaluate(points, ctx)
        return values

    def derive(self, alpha):
        return make_sum([term.derive(alpha) for term in self.terms])

    def to_dict(self):
        return {"kind": self.kind, "terms": [term.to_dict() for term in self.terms]}


class ProductNode(Node):
    kind = "product"

    def __init__(self, left: Node, right: Node):
        self.left = left
        self.right = right

    def children(self):
        return (self.left, self.right)

    def evaluate(self, points, ctx):
        values = self.left.evaluate(points, ctx)
        nonzero = values != 0
        if np.any(nonzero):
            values = values.copy()
            values[nonzero] = values[nonzero] * self.right.evaluate(points[nonzero], ctx)
        return values

    def derive(self, alpha):
        terms = []
        for beta in multi_index_leq(alpha):
            rest = tuple(a - b for a, b in zip(alpha, beta))
            term = make_product(self.left.derive(beta), self.right.derive(rest))
            terms.append(make_scalar_mul(AsymptoticScalar.constant(multi_binomial(alpha, beta)), term))
        return make_sum(terms)

    def singular_order(self, dim):
        return self.left.singular_order(dim) + self.right.singular_order(dim)

    def to_dict(self):
        return {"kind": self.kind, "left": self.left.to_dict(), "right": self.right.to_dict()}


class ScalarMulNode(Node):
    kind = "scalar_mul"

    def __init__(self, scalar: AsymptoticScalar, node: Node):
        self.scalar = scalar
        self.node = node

    def children(self):
        return (self.node,)

    def evaluate(self, points, ctx):
        return self.scalar.evaluate(ctx.rho) * self.node.evaluate(points, ctx)

    def derive(self, alpha):
        return make_scalar_mul(self.scalar, self.node.derive(alpha))

    def singular_order(self, dim):
        return ScalarLeaf(self.scalar).singular_order(dim) + self.node.singular_order(dim)

    def to_dict(self):
        return {"kind": self.kind, "scalar": self.scalar.to_json(), "node": self.node.to_dict()}


class ComposeNode(Node):
    """g(f) for a univariate smooth g applied to the values of f."""

    kind = "compose"

    def __init__(self, outer: UnivariateSmooth, inner: Node, dim: int):
        self.outer = outer
        self.inner = inner
        self.dim = dim

    def children(self):
        return (self.inner,)

    def evaluate(self, points, ctx):
        inner = self.inner.evaluate(points, ctx)
        argument = inner.real if np.all(inner.imag == 0) else inner
        with np.errstate(over="ignore", invalid="ignore"):
            return np.asarray(self.outer.derivative_of_order(self.outer.order)(argument), dtype=complex)

    def derive(self, alpha):
        if not any(alpha):
            return self
        return _derive_by_first_orders(alpha, self._first_derivative)

    def _first_derivative(self, axis: int) -> Node:
        return make_product(
            ComposeNode(self.outer.derivative((1,)), self.inner, self.dim),
            self.inner.derive(unit_index(axis, self.dim)),
        )

    def singular_order(self, dim):
        return 0

    def to_dict(self):
        return {"kind": self.kind, "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


class PushforwardNode(Node):
    """f o theta^-1."""

    kind = "pushforward"

    def __init__(self, inner: Node, theta: Diffeomorphism):
        self.inner = inner
        self.theta = theta

    def children(self):
        return (self.inner,)

    def evaluate(self, points, ctx):
        return self.inner.evaluate(self.theta.inverse(points), ctx)

    def derive(self, alpha):
        if not any(alpha):
            return self
        if not self.theta.is_affine:
            raise UnsupportedTermError(f"Derivatives of a pushforward need an affine map, got {self.theta.name}")
        return _derive_by_first_orders(alpha, self._first_derivative)

    def _first_derivative(self, axis: int) -> Node:
        inverse = self.theta.inverse_linear
        terms = []
        for j in range(self.theta.dim):
            if inverse[j, axis] != 0:
                pushed = PushforwardNode(self.inner.derive(unit_index(j, self.theta.dim)), self.theta)
                terms.append(make_scalar_mul(AsymptoticScalar.constant(float(inverse[j, axis])), pushed))
        return make_sum(terms)

    def landmarks(self):
        return [tuple(self.theta.map_point(point)) for point in self.inner.landmarks()]

    def breaks(self, rho, dim):
        if not self.theta.is_axis_aligned:
            return [set() for _ in range(dim)]
        inner = self.inner.breaks(rho, dim)
        return [set(axis) for axis in self.theta.map_breaks([sorted(values) for values in inner])]

    def to_dict(self):
        return {"kind": self.kind, "theta": self.theta.to_dict(), "inner": self.inner.to_dict()}


def _derive_by_first_orders(alpha: MultiIndex, first_derivative) -> Node:
    """Take one first-order derivative, then hand the remaining orders to the new tree."""
    axis = next(i for i, a in enumerate(alpha) if a > 0)
    remaining = tuple(a - (1 if i == axis else 0) for i, a in enumerate(alpha))
    first = first_derivative(axis)
    return first.derive(remaining) if any(remaining) else first


# -- smart constructors with zero folding ---------------------------------------------------


def is_zero_node(node: Node) -> bool:
    if isinstance(node, ScalarLeaf):
        return node.value.is_zero
    if isinstance(node, SmoothLeaf) and isinstance(node.function, Polynomial):
        return node.function.is_zero
    return False


def make_sum(terms: Sequence[Node]) -> Node:
    flat = []
    for term in terms:
        if is_zero_node(term):
            continue
        if isinstance(term, SumNode):
            flat.extend(term.terms)
        else:
            flat.append(term)
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return SumNode(flat)


def make_product(left: Node, right: Node) -> Node:
    if is_zero_node(left) or is_zero_node(right):
        return ZERO
    if isinstance(left, ScalarLeaf):
        return make_scalar_mul(left.value, right)
    if isinstance(right, ScalarLeaf):
        return make_scalar_mul(right.value, left)
    return ProductNode(left, right)


def make_scalar_mul(scalar: AsymptoticScalar, node: Node) -> Node:
    if scalar.is_zero or is_zero_node(node):
        return ZERO
    if scalar == 1 and scalar.truncation_order is None:
        return node
    if isinstance(node, ScalarLeaf):
        return ScalarLeaf(scalar * node.value)
    if isinstance(node, ScalarMulNode):
        return make_scalar_mul(scalar * node.scalar, node.node)
    return ScalarMulNode(scalar, node)


# -- generalized functions ------------------------------------------------------------------


class GenFunc:

    def __init__(self, domain: Domain, node: Node):
        self.domain = domain
        self.node = node

    @property
    def dim(self) -> int:
        return self.domain.dim

    # evaluation

    def evaluate(self, points, ctx: EvalContext, check_domain: bool = True) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if check_domain and not np.all(self.domain.contains_points(points)):
            raise OutsideDomainError("Evaluation point outside the domain of the generalized function")
        values = self.node.evaluate(points, ctx)
        return np.asarray(values, dtype=complex)

    def eval(self, x, ctx: EvalContext) -> complex:
        point = np.asarray(x, dtype=float).reshape(1, -1)
        return complex(self.evaluate(point, ctx)[0])

    # algebra

    def _check_same_domain(self, other: "GenFunc"):
        if other.domain != self.domain:
            raise DomainError("Generalized functions live on different domains")

    def __add__(self, other):
        if isinstance(other, GenFunc):
            return combine("add", self, other)
        if isinstance(other, (AsymptoticScalar, numbers.Number)):
            return combine("add", self, constant(other, self.domain))
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, GenFunc):
            return combine("mul", self, other)
        if isinstance(other, (AsymptoticScalar, numbers.Number)):
            return combine("scalar_mul", self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return combine("scalar_mul", self, -1)

    def __sub__(self, other):
        return self + (-1) * other

    def __rsub__(self, other):
        return (-1) * self + other

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 1:
            raise ValueError("Only positive integer powers are supported")
        result = self
        for _ in range(power - 1):
            result = result * self
        return result

    def derive(self, alpha) -> "GenFunc":
        alpha = normalize_multi_index(alpha, self.dim)
        if not any(alpha):
            return self
        return GenFunc(self.domain, self.node.derive(alpha))

    def restrict(self, sub: Domain) -> "GenFunc":
        return restrict(self, sub)

    # structure

    def landmarks(self) -> List[Tuple[float, ...]]:
        return [point for point in self.node.landmarks() if self.domain.contains(point)]

    def breaks(self, rho: float) -> Tuple[Tuple[float, ...], ...]:
        return tuple(tuple(sorted(axis)) for axis in self.node.breaks(rho, self.dim))

    def singular_order(self) -> int:
        return self.node.singular_order(self.dim)

    def to_dict(self) -> dict:
        return {"domain": self.domain.to_dict(), "expr": self.node.to_dict()}

    def __repr__(self) -> str:
        return f"GenFunc({self.node.kind} on {self.domain.boxes})"


def combine(op: str, f: GenFunc, g: Union[GenFunc, ScalarLike]) -> GenFunc:
    if op == "scalar_mul":
        scalar = AsymptoticScalar.coerce(g)
        return GenFunc(f.domain, make_scalar_mul(scalar, f.node))
    if not isinstance(g, GenFunc):
        raise TypeError(f"'{op}' needs two generalized functions")
    f._check_same_domain(g)
    if op == "add":
        return GenFunc(f.domain, make_sum([f.node, g.node]))
    if op == "mul":
        return GenFunc(f.domain, make_product(f.node, g.node))
    raise ValueError(f"Unknown operation '{op}'")


def derive(f: GenFunc, alpha) -> GenFunc:
    return f.derive(alpha)


def restrict(f: GenFunc, sub: Domain) -> GenFunc:
    if sub.is_empty:
        raise EmptyDomainError("Cannot restrict to an empty domain")
    if not sub.is_subdomain_of(f.domain):
        raise NotSubdomainError(f"{sub.boxes} is not contained in {f.domain.boxes}")
    return GenFunc(sub, f.node)


def sigma_embed(f: StandardFunction, dom: Domain) -> GenFunc:
    if f.dim != dom.dim:
        raise DomainError(f"Function of dimension {f.dim} on a domain of dimension {dom.dim}")
    if not f.is_smooth:
        raise UnsupportedTermError(f"{f.name} is not smooth and has no sigma embedding")
    return GenFunc(dom, SmoothLeaf(f))


def constant(value: ScalarLike, dom: Domain) -> GenFunc:
    return GenFunc(dom, ScalarLeaf(AsymptoticScalar.coerce(value)))


def zero(dom: Domain) -> GenFunc:
    return GenFunc(dom, ZERO)


def delta_hat(kernel: Kernel, dom: Domain, center: Optional[Sequence[float]] = None, alpha=None) -> GenFunc:
    """The class of d^alpha Delta_rho(x - center) without a cutoff."""
    center = tuple(center) if center is not None else (0.0,) * dom.dim
    alpha = normalize_multi_index(alpha if alpha is not None else (0,) * dom.dim, dom.dim)
    return GenFunc(dom, KernelNode(kernel, center, alpha))


def cutoff(kernel: Kernel, dom: Domain) -> GenFunc:
    return GenFunc(dom, CutoffNode(kernel, dom, (0,) * dom.dim))


def compose(outer: UnivariateSmooth, f: GenFunc) -> GenFunc:
    return GenFunc(f.domain, ComposeNode(outer, f.node, f.dim))


# -- the decision procedure for equality -----------------------------------------------------


@dataclass
class MonadComparison:
    passed: bool
    max_error: float
    max_scaled_error: float
    rho_used: List[float]
    worst_point: Optional[Tuple[float, ...]] = None
    worst_rho: Optional[float] = None


def usable_rhos(dom: Domain, points: Sequence[NearStandardPoint], rho_grid: Sequence[float], rho_max: float = 0.5) -> List[float]:
    threshold = rho_threshold(dom, points, rho_max)
    kept = [rho for rho in rho_grid if rho <= threshold]
    dropped = len(rho_grid) - len(kept)
    if dropped:
        logger.debug(f"Dropped {dropped} rho values above the threshold {threshold:.3e}")
    return kept


def compare_on_monad(
    f: GenFunc,
    g: GenFunc,
    pts: Sequence[NearStandardPoint],
    rho_grid: Sequence[float],
    tol: float,
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS,
    local_substitution: bool = True,
    rho_max: float = 0.5,
) -> MonadComparison:
    """Compare f and g at every near-standard point for every usable rho.

    A point passes when ``|f - g| <= tol * max(1, |f|, |g|)``; the scale factor absorbs
    the relative rounding of values that grow like negative powers of rho.
    """
    f._check_same_domain(g)
    rhos = usable_rhos(f.domain, pts, rho_grid, rho_max)
    if not rhos:
        raise DomainError("No rho of the grid is small enough for the sampled points")

    max_error = 0.0
    max_scaled = 0.0
    worst_point, worst_rho = None, None
    for rho in rhos:
        ctx = EvalContext(rho, nodes_per_axis, local_substitution, tol, rho_max)
        points = np.array([point.at(rho) for point in pts])
        values_f = f.evaluate(points, ctx)
        values_g = g.evaluate(points, ctx)
        errors = np.abs(values_f - values_g)
        scale = np.maximum(1.0, np.maximum(np.abs(values_f), np.abs(values_g)))
        scaled = errors / scale
        if not np.all(np.isfinite(scaled)):
            return MonadComparison(False, math.inf, math.inf, rhos, tuple(points[0]), rho)
        index = int(np.argmax(scaled))
        if scaled[index] > max_scaled:
            max_scaled = float(scaled[index])
            worst_point, worst_rho = tuple(points[index]), rho
        max_error = max(max_error, float(errors.max()))
    return MonadComparison(max_scaled <= tol, max_error, max_scaled, rhos, worst_point, worst_rho)


def equals_on_monad(
    f: GenFunc,
    g: GenFunc,
    pts: Sequence[NearStandardPoint],
    rho_grid: Sequence[float],
    tol: float,
    **options,
) -> bool:
    return compare_on_monad(f, g, pts, rho_grid, tol, **options).passed


# -- support ----------------------------------------------------------------------------------


def _cell_points(cell: Box, landmarks: Sequence[Tuple[float, ...]]) -> List[NearStandardPoint]:
    axes = []
    for lo, hi in cell:
        step = hi - lo
        center = 0.5 * (lo + hi)
        axes.append((center - step / 3, center, center + step / 3))
    bases = [()]
    for values in axes:
        bases = [base + (value,) for base in bases for value in values]
    for landmark in landmarks:
        if all(lo <= x <= hi for x, (lo, hi) in zip(landmark, cell)):
            bases.append(tuple(landmark))

    points = []
    dim = len(cell)
    for base in bases:
        points.append(NearStandardPoint(base))
        for sign in (1.0, -1.0):
            offset = tuple(AsymptoticScalar.monomial(1, sign * 0.5) for _ in range(dim))
            points.append(NearStandardPoint(base, offset))
    return points


def support_estimate(
    f: GenFunc,
    grid_step: float,
    rho_list: Sequence[float],
    tol: float = 1e-12,
    window: float = 2.0,
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS,
    rho_max: float = 0.5,
) -> List[Box]:
    """Outer approximation of the support: closed grid cells where f does not vanish on the monad.

    Each cell is sampled at three points per axis plus the landmarks of f inside it, every
    one also shifted by +-rho/2; a feature narrower than a third of a cell that avoids
    all of those samples is not seen.
    """
    landmarks = f.landmarks()
    support: List[Box] = []
    for cell in grid_cells(f.domain.bounding_box(window), grid_step):
        points = [point for point in _cell_points(cell, landmarks) if f.domain.contains(point.base)]
        if not points:
            continue
        threshold = rho_threshold(f.domain, points, rho_max)
        if threshold <= 0.0:
            continue
        rhos = [rho for rho in rho_list if rho <= threshold] or [threshold]
        for rho in rhos:
            ctx = EvalContext(rho, nodes_per_axis, True, tol, rho_max)
            values = f.evaluate(np.array([point.at(rho) for point in points]), ctx)
            if np.any(np.abs(values) > tol):
                support.append(cell)
                break
    return sorted(support)
