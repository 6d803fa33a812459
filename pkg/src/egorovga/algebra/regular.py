"""Membership in the subalgebra generated by standard smooth functions and moderate scalars.

Membership is only semi-decidable from finite data: :func:`certify_member` affirms it from
the shape of the expression tree, :func:`refute_member` denies it from the growth of
derivatives in rho, and whatever neither settles stays ``inconclusive``.
"""

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .domain import NearStandardPoint, sample_near_standard
from .functions import MultiIndex
from .genfun import (
    EvalContext,
    GenFunc,
    Node,
    ProductNode,
    ScalarLeaf,
    ScalarMulNode,
    SmoothLeaf,
    SumNode,
    usable_rhos,
)
from .quadrature import DEFAULT_NODES_PER_AXIS
from .weak import fit_order
from ..core.exceptions import ConfigurationError
from ..utils.logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)

DEFAULT_REGULARITY_GRID = tuple(2.0**-k for k in range(3, 9))


class RegularityVerdict(Enum):
    CERTIFIED_MEMBER = "certified_member"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass
class GrowthTrace:
    """Fitted growth exponents n(k) of max_{|alpha|=k} |d^alpha f| ~ rho^-n(k) at one point."""

    point: Tuple[float, ...]
    exponents: List[float]
    worst_alpha: List[MultiIndex]
    overflow: bool = False

    def increments(self) -> List[float]:
        return [b - a for a, b in zip(self.exponents, self.exponents[1:])]

    def to_dict(self) -> dict:
        return {
            "point": list(self.point),
            "growth_exponents": [_finite_or_text(n) for n in self.exponents],
            "worst_alpha": [list(alpha) for alpha in self.worst_alpha],
            "overflow": self.overflow,
        }


@dataclass
class RegularityReport:
    verdict: RegularityVerdict
    certificate: List[str] = field(default_factory=list)
    trace: List[GrowthTrace] = field(default_factory=list)
    refuting: Optional[GrowthTrace] = None
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "certificate": list(self.certificate),
            "refuting": self.refuting.to_dict() if self.refuting else None,
            "trace": [entry.to_dict() for entry in self.trace],
            "message": self.message,
        }


def _finite_or_text(value: float):
    return value if math.isfinite(value) else str(value)


# -- certification ----------------------------------------------------------------------------


def certify_member(f: GenFunc) -> RegularityReport:
    """Certified when every node is a sum, product or scalar multiple over smooth and scalar leaves."""
    certificate: List[str] = []
    blocker = _walk(f.node, certificate, depth=0)
    if blocker is None:
        return RegularityReport(RegularityVerdict.CERTIFIED_MEMBER, certificate)
    return RegularityReport(
        RegularityVerdict.INCONCLUSIVE,
        certificate,
        message=f"{blocker.kind} node is outside the generating set",
    )


def _walk(node: Node, certificate: List[str], depth: int) -> Optional[Node]:
    indent = "  " * depth
    if isinstance(node, SmoothLeaf):
        if not node.function.is_smooth:
            return node
        certificate.append(f"{indent}standard smooth {node.function!r}")
        return None
    if isinstance(node, ScalarLeaf):
        certificate.append(f"{indent}scalar {node.value!r}, bounded by rho^-{node.singular_order(1)}")
        return None
    if isinstance(node, ScalarMulNode):
        certificate.append(f"{indent}scalar multiple by {node.scalar!r}")
        return _walk(node.node, certificate, depth + 1)
    if isinstance(node, (SumNode, ProductNode)):
        certificate.append(f"{indent}{node.kind}")
        for child in node.children():
            blocker = _walk(child, certificate, depth + 1)
            if blocker is not None:
                return blocker
        return None
    return node


# -- refutation -------------------------------------------------------------------------------


def multi_indices_of_order(order: int, dim: int) -> List[MultiIndex]:
    return [alpha for alpha in itertools.product(range(order + 1), repeat=dim) if sum(alpha) == order]


def refute_member(
    f: GenFunc,
    alpha_max: int = 6,
    pts: Optional[Sequence[NearStandardPoint]] = None,
    rho_grid: Sequence[float] = DEFAULT_REGULARITY_GRID,
    slope_threshold: float = 0.5,
    nodes_per_axis: int = DEFAULT_NODES_PER_AXIS,
    rho_max: float = 0.5,
    seed: int = 7,
) -> RegularityReport:
    """Refuted when the growth exponent keeps rising by at least ``slope_threshold`` per order.

    The rise has to persist over every step in the top half of orders at one sampled
    point; zero samples count as bounded, overflow counts as unbounded growth.
    """
    if alpha_max < 2:
        raise ConfigurationError(f"alpha_max must be at least 2, got {alpha_max}")
    if pts is None:
        pts = sample_near_standard(f.domain, 4, (1, 2), seed=seed, anchors=f.landmarks())
    rhos = sorted(usable_rhos(f.domain, pts, rho_grid, rho_max), reverse=True)
    if len(rhos) < 2:
        return RegularityReport(RegularityVerdict.INCONCLUSIVE, message="fewer than two usable rho values")

    derivatives: Dict[MultiIndex, GenFunc] = {}
    for order in range(alpha_max + 1):
        for alpha in multi_indices_of_order(order, f.dim):
            derivatives[alpha] = f.derive(alpha)

    # magnitudes[order][rho index] holds (n_points,) maxima over |alpha| = order
    magnitudes = np.zeros((alpha_max + 1, len(rhos), len(pts)))
    worst = np.zeros((alpha_max + 1, len(pts)), dtype=int)
    labels = {order: multi_indices_of_order(order, f.dim) for order in range(alpha_max + 1)}
    for column, rho in enumerate(rhos):
        ctx = EvalContext(rho, nodes_per_axis, True, rho_max=rho_max)
        points = np.array([point.at(rho) for point in pts])
        for order in range(alpha_max + 1):
            with np.errstate(over="ignore", invalid="ignore"):
                stacked = np.array([np.abs(derivatives[alpha].evaluate(points, ctx)) for alpha in labels[order]])
            stacked = np.where(np.isnan(stacked), np.inf, stacked)
            magnitudes[order, column] = stacked.max(axis=0)
            if column == len(rhos) - 1:
                worst[order] = stacked.argmax(axis=0)

    top_half = range(alpha_max // 2, alpha_max)
    report = RegularityReport(RegularityVerdict.INCONCLUSIVE)
    for index, point in enumerate(pts):
        trace = _growth_trace(point, rhos, magnitudes[:, :, index], [labels[k][worst[k, index]] for k in labels])
        report.trace.append(trace)
        increments = trace.increments()
        if trace.overflow or all(increments[k] >= slope_threshold for k in top_half):
            report.verdict = RegularityVerdict.REFUTED
            report.refuting = trace
            report.message = "derivative growth exceeds every fixed power of 1/rho"
            logger.debug(f"Refuted at {trace.point}: growth exponents {trace.exponents}")
            break
    return report


def _growth_trace(
    point: NearStandardPoint, rhos: Sequence[float], magnitudes: np.ndarray, worst_alpha: List[MultiIndex]
) -> GrowthTrace:
    label = tuple(point.at(rhos[-1]))
    if not np.all(np.isfinite(magnitudes)):
        return GrowthTrace(label, [math.inf] * magnitudes.shape[0], worst_alpha, overflow=True)
    exponents = []
    for row in magnitudes:
        if np.any(row == 0):
            exponents.append(0.0)
            continue
        exponents.append(-fit_order(list(zip(rhos, row))).slope)
    return GrowthTrace(label, exponents, worst_alpha)
