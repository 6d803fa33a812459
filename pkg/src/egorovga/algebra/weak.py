"""Pairings with test functions, association and the rho-sweep fitting oracle."""

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.linear_model import LinearRegression

from .domain import Box, Domain
from .functions import (
    AffinePullback,
    LinearCombination,
    Polynomial,
    StandardFunction,
    TensorProduct,
    catalogue_function,
    normalize_multi_index,
)
from .genfun import EvalContext, GenFunc
from .quadrature import DEFAULT_NODES_PER_AXIS, integrate_box
from .scalars import AsymptoticScalar
from ..core.exceptions import ConfigurationError, DomainError, NotSubdomainError
from ..utils.logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)

BUMP_INTEGRAL = 0.44399381616807943
SIGNIFICANCE_FLOOR = 1e-10
# Pieces up to this many rho wide hold a kernel bump and get the evaluation rule.
FINE_PIECE_WIDTH = 8.0

Sample = Tuple[float, complex]


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"

    def __bool__(self) -> bool:
        return self is Verdict.TRUE


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A compactly supported smooth function with its closed support box."""

    __test__ = False

    function: StandardFunction
    support: Box
    family: str = "bump"
    phi_id: str = "phi"

    def __call__(self, points) -> np.ndarray:
        return self.function(points)

    @property
    def dim(self) -> int:
        return self.function.dim

    def derivative(self, alpha) -> "TestFunction":
        alpha = normalize_multi_index(alpha, self.dim)
        suffix = "".join(str(a) for a in alpha)
        return TestFunction(self.function.derivative(alpha), self.support, self.family, f"{self.phi_id}_d{suffix}")

    def to_dict(self) -> dict:
        return {"phi_id": self.phi_id, "family": self.family, "support": [list(interval) for interval in self.support]}


def bump_test_function(
    center: Sequence[float],
    scale: float,
    power: int = 0,
    phi_id: Optional[str] = None,
) -> TestFunction:
    """prod_i w((x_i - c_i) / s) / (s * int w), optionally times x_0^power."""
    center = tuple(float(c) for c in center)
    dim = len(center)
    factors = [
        AffinePullback(catalogue_function("bump"), [[1.0 / scale]], [-c / scale]) for c in center
    ]
    profile = factors[0] if dim == 1 else TensorProduct(factors)
    function: StandardFunction = LinearCombination(((1.0 / (scale * BUMP_INTEGRAL) ** dim, profile),))
    family = "bump"
    if power:
        exponent = (power,) + (0,) * (dim - 1)
        function = function * Polynomial.monomial(exponent, 1, dim)
        family = f"bump*x^{power}"
    support = tuple((c - scale, c + scale) for c in center)
    return TestFunction(function, support, family, phi_id or f"bump(c={center},s={scale},p={power})")


BUMP_LAYOUT = (
    (0.0, 0.5),
    (0.0, 0.25),
    (0.1, 0.3),
    (-0.2, 0.4),
    (0.3, 0.5),
    (-0.5, 0.3),
    (0.5, 0.2),
    (0.05, 0.15),
    (-0.1, 0.8),
)
POLYNOMIAL_VARIANTS = (0, 1, 2)


def default_suite(
    dim: int = 1,
    domain: Optional[Domain] = None,
    margin: float = 0.0,
    origin: Optional[Sequence[float]] = None,
) -> List[TestFunction]:
    """Nine translated and scaled bumps plus bump times {1, x, x^2}; twelve functions in all.

    ``origin`` translates every centre; with ``domain`` given, functions whose support
    (grown by ``margin``) leaves the domain are dropped.
    """
    origin = tuple(origin) if origin is not None else (0.0,) * dim
    suite = []
    for index, (center, scale) in enumerate(BUMP_LAYOUT):
        centers = (center,) + tuple(-0.5 * center for _ in range(dim - 1))
        centers = tuple(c + o for c, o in zip(centers, origin))
        suite.append(bump_test_function(centers, scale, phi_id=f"phi{index:02d}"))
    for offset, power in enumerate(POLYNOMIAL_VARIANTS):
        suite.append(bump_test_function(origin, 0.6, power, phi_id=f"phi{len(BUMP_LAYOUT) + offset:02d}"))
    if domain is not None:
        suite = [phi for phi in suite if _support_inside(phi.support, domain, margin)]
    return suite


def _support_inside(support: Box, domain: Domain, margin: float) -> bool:
    grown = Domain((tuple((lo - margin, hi + margin) for lo, hi in support),), len(support), closed=True)
    return grown.is_subdomain_of(domain)


# -- fitting -----------------------------------------------------------------------------------


@dataclass
class AsymptoticFit:
    samples: List[Sample]
    fitted_terms: AsymptoticScalar
    residual: float
    exponents: Tuple[Fraction, ...] = ()
    reliable: bool = True
    message: str = ""

    def coefficient(self, exponent) -> complex:
        return complex(self.fitted_terms.coefficient(Fraction(exponent)))

    @property
    def standard_part(self) -> complex:
        return self.coefficient(0)

    def leading_exponent(self, tol: float = 0.0) -> Optional[Fraction]:
        for exponent in self.exponents:
            if abs(self.coefficient(exponent)) > tol:
                return exponent
        return None

    def to_dict(self) -> dict:
        return {
            "exponents": [str(e) for e in self.exponents],
            "coefficients": [
                [self.coefficient(e).real, self.coefficient(e).imag] for e in self.exponents
            ],
            "residual": self.residual,
            "reliable": self.reliable,
            "message": self.message,
        }


@dataclass
class OrderFit:
    slope: float
    intercept: float
    residual: float
    points_used: int


def default_exponents(
    singular_order: int, n_samples: int, rho_max: float, q: int = 5
) -> List[Fraction]:
    """Integer exponents from ``-singular_order`` up to ``q + 2``.

    Positive exponents whose largest contribution on the grid falls below double
    precision are left out, and the dictionary keeps two degrees of freedom spare.
    """
    candidates = []
    for exponent in range(-singular_order, q + 3):
        if exponent > 0 and rho_max**exponent < SIGNIFICANCE_FLOOR:
            break
        candidates.append(Fraction(exponent))
    return candidates[: max(1, n_samples - 2)]


def fit_asymptotics(
    samples: Sequence[Sample],
    exponent_dictionary: Sequence,
    residual_tol: float = 1e-6,
    floor: float = 1e-10,
) -> AsymptoticFit:
    """Least squares of the samples against {rho^e} with complex coefficients."""
    samples = [(float(rho), complex(value)) for rho, value in samples]
    exponents = tuple(Fraction(e) for e in exponent_dictionary)
    empty = AsymptoticScalar((), truncation_order=None)

    if len(samples) < len(exponents) + 2:
        message = f"{len(samples)} samples cannot support {len(exponents)} exponents"
        logger.warning(f"Unreliable fit: {message}")
        return AsymptoticFit(samples, empty, math.inf, exponents, False, message)

    rhos = np.array([rho for rho, _ in samples])
    values = np.array([value for _, value in samples])
    design = np.column_stack([rhos ** float(e) for e in exponents])
    scales = np.max(np.abs(design), axis=0)
    normalized = design / scales

    if np.linalg.matrix_rank(normalized) < len(exponents):
        message = "rank-deficient design"
        logger.warning(f"Unreliable fit: {message}")
        return AsymptoticFit(samples, empty, math.inf, exponents, False, message)

    targets = np.column_stack([values.real, values.imag])
    model = LinearRegression(fit_intercept=False).fit(normalized, targets)
    coefficients = (model.coef_[0] + 1j * model.coef_[1]) / scales
    predicted = model.predict(normalized)
    residual = float(np.max(np.abs((predicted[:, 0] + 1j * predicted[:, 1]) - values)))

    scale = float(np.max(np.abs(values))) if len(values) else 0.0
    reliable = residual <= residual_tol * scale + floor
    message = "" if reliable else f"residual {residual:.3e} above {residual_tol:.1e} * {scale:.3e} + {floor:.1e}"
    if not reliable:
        logger.warning(f"Unreliable fit: {message}")

    terms = tuple(
        (exponent, _real_if_possible(coefficient)) for exponent, coefficient in zip(exponents, coefficients)
    )
    order = exponents[-1] + 1 if exponents else None
    return AsymptoticFit(
        samples, AsymptoticScalar(terms, truncation_order=order, truncated=True), residual, exponents, reliable, message
    )


def _real_if_possible(value: complex):
    return value.real if value.imag == 0 else value


def fit_order(samples: Sequence[Sample]) -> OrderFit:
    """Slope of log|v| against log(rho); zero samples are skipped."""
    usable = [(rho, abs(value)) for rho, value in samples if abs(value) > 0 and np.isfinite(abs(value))]
    if len(usable) < 2:
        return OrderFit(math.inf, 0.0, 0.0, len(usable))
    x = np.log([[rho] for rho, _ in usable])
    y = np.log([magnitude for _, magnitude in usable])
    model = LinearRegression().fit(x, y)
    residual = float(np.max(np.abs(model.predict(x) - y)))
    return OrderFit(float(model.coef_[0]), float(model.intercept_), residual, len(usable))


# -- pairing and integrals ------------------------------------------------------------------------


def _region_values(
    f: GenFunc,
    region: Sequence[Box],
    weight,
    rho_grid: Sequence[float],
    nodes: int,
    panels: int,
    nodes_per_axis: int,
) -> List[Sample]:
    samples = []
    for rho in rho_grid:
        ctx = EvalContext(rho, nodes_per_axis, True)
        breaks = [sorted(axis) for axis in f.breaks(rho)]

        def integrand(points, ctx=ctx):
            values = f.evaluate(points, ctx)
            return values if weight is None else values * weight(points)

        total = sum(
            integrate_box(
                integrand, box, breaks, nodes, panels, nodes_per_axis, FINE_PIECE_WIDTH * rho
            )
            for box in region
        )
        samples.append((rho, complex(total)))
    return samples


def pairing_samples(
    f: GenFunc,
    phi: TestFunction,
    rho_grid: Sequence[float],
    nodes: int = 48,
    panels: int = 4,
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS,
) -> List[Sample]:
    """Raw (rho, <f, phi>) samples, unfitted."""
    support = Domain((phi.support,), phi.dim, closed=True)
    if not support.is_subdomain_of(f.domain):
        raise NotSubdomainError(f"Support {phi.support} of {phi.phi_id} is not inside the domain")
    corners = np.array(list(itertools.product(*phi.support)), dtype=float)
    margin = float(np.min(f.domain.distance_to_boundary_points(corners)))
    if not margin > max(rho_grid):
        raise ConfigurationError(
            f"Support of {phi.phi_id} is {margin:.3e} from the boundary, not more than rho = {max(rho_grid):.3e}"
        )
    return _region_values(f, [phi.support], phi, rho_grid, nodes, panels, nodes_per_axis)


def pair(
    f: GenFunc,
    phi: TestFunction,
    rho_grid: Sequence[float],
    exponents: Optional[Sequence] = None,
    nodes: int = 48,
    panels: int = 4,
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS,
    residual_tol: float = 1e-6,
    floor: float = 1e-10,
    q: int = 5,
) -> AsymptoticFit:
    """<f, phi> = int f(xi; rho) phi(xi) d xi over supp phi for each rho, then fitted.

    supp phi must stay more than max(rho_grid) away from the boundary of the domain.
    """
    samples = pairing_samples(f, phi, rho_grid, nodes, panels, nodes_per_axis)
    if exponents is None:
        exponents = default_exponents(f.singular_order(), len(samples), max(rho_grid), q)
    return fit_asymptotics(samples, exponents, residual_tol, floor)


def integrate_region(
    f: GenFunc,
    X: Domain,
    rho_grid: Sequence[float],
    exponents: Optional[Sequence] = None,
    nodes: int = 48,
    panels: int = 4,
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS,
    residual_tol: float = 1e-6,
    floor: float = 1e-10,
    q: int = 5,
) -> AsymptoticFit:
    """int_X f(xi; rho) d xi over a compact union of closed boxes, then fitted."""
    if not X.is_bounded or X.is_empty:
        raise DomainError("Integration region must be a non-empty bounded union of boxes")
    closed = Domain(X.boxes, X.dim, closed=True)
    if not closed.is_subdomain_of(f.domain):
        raise NotSubdomainError("Integration region is not compactly contained in the domain")
    samples = _region_values(f, list(X.boxes), None, rho_grid, nodes, panels, nodes_per_axis)
    if exponents is None:
        exponents = default_exponents(f.singular_order(), len(samples), max(rho_grid), q)
    return fit_asymptotics(samples, exponents, residual_tol, floor)


# -- association --------------------------------------------------------------------------------


@dataclass
class AssociationReport:
    verdict: Verdict
    fits: Dict[str, AsymptoticFit] = field(default_factory=dict)
    failing: List[str] = field(default_factory=list)
    max_error: float = 0.0

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "failing": list(self.failing),
            "max_error": self.max_error,
            "fits": {phi_id: fit.to_dict() for phi_id, fit in sorted(self.fits.items())},
        }


def association_report(
    f: GenFunc,
    g: GenFunc,
    phi_suite: Sequence[TestFunction],
    rho_grid: Sequence[float],
    tol: float,
    **pairing_options,
) -> AssociationReport:
    """Fitted coefficients of rho^e, e <= 0, of <f - g, phi> must vanish within tol for every phi."""
    difference = f - g
    report = AssociationReport(Verdict.TRUE)
    indeterminate = False
    for phi in phi_suite:
        fit = pair(difference, phi, rho_grid, **pairing_options)
        report.fits[phi.phi_id] = fit
        if not fit.reliable:
            indeterminate = True
            continue
        divergent = [abs(fit.coefficient(e)) for e in fit.exponents if e <= 0]
        error = max(divergent, default=0.0)
        report.max_error = max(report.max_error, error)
        if error > tol:
            report.failing.append(phi.phi_id)
    if report.failing:
        report.verdict = Verdict.FALSE
    elif indeterminate:
        report.verdict = Verdict.INDETERMINATE
    return report


def associated(
    f: GenFunc,
    g: GenFunc,
    phi_suite: Sequence[TestFunction],
    rho_grid: Sequence[float],
    tol: float,
    **pairing_options,
) -> Verdict:
    return association_report(f, g, phi_suite, rho_grid, tol, **pairing_options).verdict
