"""The delta kernel Delta_rho and the cutoff Pi_Omega.

The one-dimensional profile is ``psi(t) = w(t) * P(t)`` with the bump
``w(t) = exp(-1/(1-t^2))`` and an even polynomial ``P`` fixed by the moment conditions
``int psi = 1`` and ``int psi t^(2k) = 0`` for ``k = 1..m``. In ``d`` dimensions the kernel
is the tensor product ``Delta_rho(xi) = rho^-d prod_i psi(xi_i / rho)``, supported in the
l-infinity ball of radius ``rho``.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial as NumpyPolynomial
from scipy import integrate
from scipy.interpolate import CubicHermiteSpline

from .domain import Domain, shrink_clip
from .functions import bump_derivative, normalize_multi_index
from .quadrature import plain_legendre, tanh_sinh_legendre
from ..core.exceptions import ConditioningError, KernelError
from ..utils.logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)

MOMENT_TOLERANCE = 1e-12
TABLE_PANEL_NODES = 8


@dataclass(frozen=True)
class Kernel:
    m: int
    poly_coeffs: Tuple[float, ...]
    moment_residuals: Tuple[float, ...] = ()
    condition_number: float = 1.0
    table_size: int = 4096
    _antiderivative: Optional[CubicHermiteSpline] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 0:
            raise KernelError(f"Number of moment constraints must be non-negative, got {self.m}")
        if len(self.poly_coeffs) != self.m + 1:
            raise KernelError(
                f"Expected {self.m + 1} polynomial coefficients for m={self.m}, got {len(self.poly_coeffs)}"
            )
        object.__setattr__(self, "poly_coeffs", tuple(float(c) for c in self.poly_coeffs))
        object.__setattr__(self, "moment_residuals", tuple(float(r) for r in self.moment_residuals))
        if self._antiderivative is None:
            object.__setattr__(self, "_antiderivative", _tabulate_antiderivative(self, self.table_size))

    @property
    def q(self) -> int:
        """Vanishing-moment order: polynomials up to this degree are reproduced exactly."""
        return 2 * self.m + 1

    @property
    def polynomial(self) -> NumpyPolynomial:
        coefficients = np.zeros(2 * self.m + 1)
        coefficients[::2] = self.poly_coeffs
        return NumpyPolynomial(coefficients)

    def psi(self, t, order: int = 0) -> np.ndarray:
        """psi^(order)(t) by the Leibniz rule on w * P."""
        t = np.asarray(t, dtype=float)
        polynomial = self.polynomial
        values = np.zeros_like(t)
        for j in range(min(order, 2 * self.m) + 1):
            values = values + math.comb(order, j) * bump_derivative(t, order - j) * polynomial.deriv(j)(t)
        return values

    def antiderivative(self, t) -> np.ndarray:
        """Psi(t) = int_{-1}^t psi, clamped to 0 and 1 outside [-1, 1]."""
        t = np.asarray(t, dtype=float)
        values = self._antiderivative(np.clip(t, -1.0, 1.0))
        values = np.where(t <= -1.0, 0.0, values)
        return np.where(t >= 1.0, 1.0, values)

    def to_dict(self) -> dict:
        grid = np.linspace(-1.0, 1.0, self.table_size)
        return {
            "m": self.m,
            "poly_coeffs": list(self.poly_coeffs),
            "moment_residuals": list(self.moment_residuals),
            "condition_number": self.condition_number,
            "psi_table": self.psi(grid).tolist(),
            "Psi_table": self.antiderivative(grid).tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Kernel":
        try:
            return cls(
                m=int(data["m"]),
                poly_coeffs=tuple(data["poly_coeffs"]),
                moment_residuals=tuple(data.get("moment_residuals", ())),
                condition_number=float(data.get("condition_number", 1.0)),
                table_size=len(data.get("psi_table", ())) or 4096,
            )
        except KeyError as error:
            raise KernelError(f"Kernel data is missing the field {error}") from error


def _tabulate_antiderivative(kernel: Kernel, table_size: int) -> CubicHermiteSpline:
    grid = np.linspace(-1.0, 1.0, table_size)
    nodes, weights = plain_legendre(TABLE_PANEL_NODES)
    lower, upper = grid[:-1, None], grid[1:, None]
    half = 0.5 * (upper - lower)
    panel_points = 0.5 * (upper + lower) + half * nodes
    panel_integrals = np.sum(half * weights * kernel.psi(panel_points), axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(panel_integrals)])
    return CubicHermiteSpline(grid, cumulative, kernel.psi(grid))


def bump_moments(count: int, quad_resolution: int) -> np.ndarray:
    """int_{-1}^{1} w(t) t^(2j) dt for j < count."""
    nodes, weights = tanh_sinh_legendre(quad_resolution)
    bump = weights * bump_derivative(nodes)
    return np.array([np.sum(bump * nodes ** (2 * j)) for j in range(count)])


def build_kernel(
    m: int = 2,
    quad_resolution: int = 128,
    table_size: int = 4096,
    max_m: int = 8,
    max_condition: float = 1e13,
) -> Kernel:
    if m < 0:
        raise KernelError(f"m must be non-negative, got {m}")
    if m > max_m:
        raise ConditioningError(
            f"m={m} exceeds the supported maximum {max_m}; the moment system is ill-conditioned, lower m"
        )

    moments = bump_moments(2 * m + 1, quad_resolution)
    system = np.array([[moments[j + k] for k in range(m + 1)] for j in range(m + 1)])
    rhs = np.zeros(m + 1)
    rhs[0] = 1.0

    condition = float(np.linalg.cond(system))
    if not np.isfinite(condition) or condition > max_condition:
        raise ConditioningError(
            f"Moment system for m={m} has condition number {condition:.3e}; lower m"
        )

    coefficients = np.linalg.solve(system, rhs)
    coefficients = coefficients + np.linalg.solve(system, rhs - system @ coefficients)
    residuals = np.abs(system @ coefficients - rhs)

    logger.debug(
        f"Built kernel m={m}: cond={condition:.3e}, max residual={residuals.max():.3e}"
    )
    if residuals.max() > MOMENT_TOLERANCE:
        logger.warning(f"Kernel m={m} moment residual {residuals.max():.3e} above {MOMENT_TOLERANCE}")

    return Kernel(
        m=m,
        poly_coeffs=tuple(coefficients),
        moment_residuals=tuple(residuals),
        condition_number=condition,
        table_size=table_size,
    )


def kernel_eval(k: Kernel, alpha, xi, rho: float) -> np.ndarray:
    """d^alpha Delta_rho(xi) = rho^(-d-|alpha|) prod_i psi^(alpha_i)(xi_i / rho)."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    dim = xi.shape[1]
    alpha = normalize_multi_index(alpha, dim)
    values = np.full(xi.shape[0], rho ** (-dim - sum(alpha)))
    for axis, order in enumerate(alpha):
        values = values * k.psi(xi[:, axis] / rho, order)
    return values


def kernel_factor_local(k: Kernel, alpha: Sequence[int], u: np.ndarray) -> np.ndarray:
    """prod_i psi^(alpha_i)(-u_i) on local nodes ``u`` of shape ``(npts, M, d)``."""
    values = np.ones(u.shape[:2])
    for axis, order in enumerate(alpha):
        values = values * (-1) ** order * k.psi(u[:, :, axis], order)
    return values


def cutoff_eval(k: Kernel, dom: Domain, xi, rho: float, alpha=None) -> np.ndarray:
    """Pi_Omega and its derivatives: the indicator of shrink_clip(dom, 3 rho) convolved with Delta_rho."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    alpha = normalize_multi_index(alpha if alpha is not None else (0,) * xi.shape[1], xi.shape[1])
    region = shrink_clip(dom, 3 * rho)
    total = np.zeros(xi.shape[0])
    for box in region.boxes:
        factor = np.ones(xi.shape[0])
        for axis, ((lo, hi), order) in enumerate(zip(box, alpha)):
            upper = (xi[:, axis] - lo) / rho
            lower = (xi[:, axis] - hi) / rho
            if order == 0:
                factor = factor * (k.antiderivative(upper) - k.antiderivative(lower))
            else:
                factor = factor * rho ** (-order) * (k.psi(upper, order - 1) - k.psi(lower, order - 1))
        total = total + factor
    return total


def _adaptive_integral(integrand, limit: int) -> float:
    """Adaptive quad on [-1, 1]; convergence notes are logged instead of warned."""
    value, error, _, *notes = integrate.quad(
        integrand, -1.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=limit, full_output=1
    )
    if notes:
        logger.debug(f"Adaptive quadrature stopped at error {error:.2e}: {notes[0].splitlines()[0]}")
    return value


def moment(k: Kernel, order: int, quad_resolution: int = 200) -> float:
    """int t^order psi(t) dt by adaptive quadrature, independent of the build-time rule."""
    return _adaptive_integral(lambda t: t**order * float(k.psi(np.array([t]))[0]), quad_resolution)


def psi_power_integral(k: Kernel, power: int = 2) -> float:
    """int psi^power dt; the rho^(d(1-power)) coefficient of int Delta_rho^power."""
    return _adaptive_integral(lambda t: float(k.psi(np.array([t]))[0]) ** power, 200)
