"""Gauss-Legendre rules for integrands concentrated at the scale rho.

The base rule is Gauss-Legendre in ``s`` after the double-exponential map
``t = tanh(pi/2 * sinh(s))``, which clusters nodes at the ends of every piece. Pieces
are cut at the breakpoints of the integrand, so every piece sees a smooth function.
"""

from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..core.exceptions import QuadratureError

SINH_WINDOW = 3.0
# Smallest per-axis rule that integrates the kernel moments to round-off.
DEFAULT_NODES_PER_AXIS = 128

Rule = Tuple[np.ndarray, np.ndarray]


@lru_cache(maxsize=None)
def tanh_sinh_legendre(n: int, s_max: float = SINH_WINDOW) -> Rule:
    """Nodes and weights on [-1, 1]."""
    s, ws = leggauss(n)
    s = s * s_max
    ws = ws * s_max
    inner = 0.5 * np.pi * np.sinh(s)
    nodes = np.tanh(inner)
    weights = ws * 0.5 * np.pi * np.cosh(s) / np.cosh(inner) ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=None)
def plain_legendre(n: int) -> Rule:
    nodes, weights = leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def base_rule(n: int, local_substitution: bool = True) -> Rule:
    return tanh_sinh_legendre(n) if local_substitution else plain_legendre(n)


def piecewise_nodes(edges: np.ndarray, rule: Rule) -> Rule:
    """Map ``rule`` onto consecutive pieces.

    ``edges`` has shape ``(npts, K + 2)`` and is sorted along the last axis; zero-length
    pieces get zero weights, so every point uses the same number of nodes.
    """
    t, w = rule
    lower = edges[:, :-1, None]
    upper = edges[:, 1:, None]
    half = 0.5 * (upper - lower)
    nodes = (0.5 * (upper + lower) + half * t).reshape(edges.shape[0], -1)
    weights = (half * w).reshape(edges.shape[0], -1)
    return nodes, weights


def local_axis_rule(
    centers: np.ndarray, rho: float, breaks: Sequence[float], rule: Rule, split: bool = True
) -> Rule:
    """Rule in the local variable u on [-1, 1] for eta = center + rho*u, split at the breaks."""
    count = centers.shape[0]
    if split and len(breaks):
        cuts = (np.asarray(breaks, dtype=float)[None, :] - centers[:, None]) / rho
        cuts = np.sort(np.clip(cuts, -1.0, 1.0), axis=1)
        edges = np.concatenate([-np.ones((count, 1)), cuts, np.ones((count, 1))], axis=1)
    else:
        edges = np.tile(np.array([[-1.0, 1.0]]), (count, 1))
    return piecewise_nodes(edges, rule)


def tensor_rule(axis_nodes: Sequence[np.ndarray], axis_weights: Sequence[np.ndarray]) -> Rule:
    """Per-point tensor product: inputs ``(npts, M_i)``; output nodes ``(npts, prod M_i, d)``."""
    count = axis_nodes[0].shape[0]
    nodes = axis_nodes[0][:, :, None]
    weights = axis_weights[0]
    for next_nodes, next_weights in zip(axis_nodes[1:], axis_weights[1:]):
        m_old, m_new = nodes.shape[1], next_nodes.shape[1]
        left = np.repeat(nodes, m_new, axis=1)
        right = np.tile(next_nodes, (1, m_old))[:, :, None]
        nodes = np.concatenate([left, right], axis=2)
        weights = (weights[:, :, None] * next_weights[:, None, :]).reshape(count, -1)
    return nodes, weights


def local_convolution(
    density: Callable[[np.ndarray], np.ndarray],
    kernel_factor: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    rho: float,
    breakpoints: Sequence[Sequence[float]],
    nodes_per_axis: int,
    local_substitution: bool = True,
) -> np.ndarray:
    """sum_j W_j f(x + rho*u_j) K(u_j) for every row x of ``points``.

    ``kernel_factor`` receives the local nodes with shape ``(npts, M, d)`` and returns
    the kernel weights ``(npts, M)`` in the local variable.
    """
    rule = base_rule(nodes_per_axis, local_substitution)
    per_axis = [
        local_axis_rule(points[:, axis], rho, breakpoints[axis], rule, split=local_substitution)
        for axis in range(points.shape[1])
    ]
    u, w = tensor_rule([nodes for nodes, _ in per_axis], [weights for _, weights in per_axis])
    samples = points[:, None, :] + rho * u
    values = np.asarray(density(samples.reshape(-1, points.shape[1]))).reshape(u.shape[:2])
    result = np.sum(w * kernel_factor(u) * values, axis=1)
    if not np.all(np.isfinite(result)):
        raise QuadratureError("Non-finite value in a convolution integral")
    return result


def box_rule(
    box: Sequence[Tuple[float, float]],
    breaks: Sequence[Sequence[float]],
    nodes: int,
    panels: int = 1,
    fine_nodes: Optional[int] = None,
    fine_width: float = 0.0,
) -> Rule:
    """Composite tensor rule over a closed box, cut at the breaks and into ``panels`` per axis.

    Pieces no wider than ``fine_width`` resolve a kernel bump and get ``fine_nodes`` nodes.
    """
    rule = tanh_sinh_legendre(nodes)
    fine_rule = tanh_sinh_legendre(max(nodes, fine_nodes or nodes))
    axis_nodes: List[np.ndarray] = []
    axis_weights: List[np.ndarray] = []
    for axis, (lo, hi) in enumerate(box):
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise QuadratureError(f"Integration box must be bounded, got ({lo}, {hi})")
        cuts = {lo, hi}
        cuts.update(np.linspace(lo, hi, panels + 1).tolist())
        cuts.update(b for b in (breaks[axis] if axis < len(breaks) else ()) if lo < b < hi)
        edges = np.array(sorted(cuts))
        pieces = [
            piecewise_nodes(
                np.array([[left, right]]), fine_rule if right - left <= fine_width else rule
            )
            for left, right in zip(edges[:-1], edges[1:])
        ]
        axis_nodes.append(np.concatenate([x for x, _ in pieces], axis=1))
        axis_weights.append(np.concatenate([w for _, w in pieces], axis=1))
    x, w = tensor_rule(axis_nodes, axis_weights)
    return x[0], w[0]


def integrate_box(
    integrand: Callable[[np.ndarray], np.ndarray],
    box: Sequence[Tuple[float, float]],
    breaks: Optional[Sequence[Sequence[float]]] = None,
    nodes: int = 48,
    panels: int = 1,
    fine_nodes: Optional[int] = None,
    fine_width: float = 0.0,
) -> complex:
    points, weights = box_rule(
        box, breaks or [() for _ in box], nodes, panels, fine_nodes, fine_width
    )
    values = np.asarray(integrand(points))
    if not np.all(np.isfinite(values)):
        raise QuadratureError("Non-finite integrand value")
    return complex(np.sum(weights * values))
