import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .scalars import AsymptoticScalar, Magnitude, classify
from ..core.exceptions import (
    DimensionMismatchError,
    DomainError,
    EmptyDomainError,
    OutsideDomainError,
)

Interval = Tuple[float, float]
Box = Tuple[Interval, ...]


def _encode_bound(value: float):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _decode_bound(value) -> float:
    return float(value)


@dataclass(frozen=True)
class Domain:
    """Finite union of disjoint axis-aligned boxes in R^d.

    Open by default (the sets Omega); ``closed=True`` marks integration regions such as
    the output of :func:`shrink_clip`. All distances use the l-infinity norm.
    """

    boxes: Tuple[Box, ...]
    dim: int
    closed: bool = False

    def __post_init__(self):
        boxes = tuple(tuple((float(lo), float(hi)) for lo, hi in box) for box in self.boxes)
        if self.dim < 1:
            raise DomainError(f"Dimension must be positive, got {self.dim}")
        for box in boxes:
            if len(box) != self.dim:
                raise DimensionMismatchError(
                    f"Box {box} has {len(box)} axes, expected {self.dim}"
                )
            for lo, hi in box:
                if not (lo < hi or (self.closed and lo == hi)):
                    raise DomainError(f"Degenerate interval ({lo}, {hi})")
        for i, first in enumerate(boxes):
            for second in boxes[i + 1 :]:
                if _boxes_overlap(first, second):
                    raise DomainError(f"Boxes {first} and {second} are not disjoint")
        object.__setattr__(self, "boxes", boxes)

    # -- constructors -------------------------------------------------------------------

    @classmethod
    def box(cls, *intervals: Interval) -> "Domain":
        return cls((tuple(intervals),), len(intervals))

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Domain":
        return cls.box((lo, hi))

    @classmethod
    def real_space(cls, dim: int = 1) -> "Domain":
        return cls((tuple((-math.inf, math.inf) for _ in range(dim)),), dim)

    @classmethod
    def union(cls, *domains: "Domain") -> "Domain":
        if not domains:
            raise EmptyDomainError("Union of no domains")
        dim = domains[0].dim
        boxes = []
        for domain in domains:
            if domain.dim != dim:
                raise DimensionMismatchError("Cannot unite domains of different dimensions")
            boxes.extend(domain.boxes)
        return cls(tuple(boxes), dim, all(domain.closed for domain in domains))

    @classmethod
    def empty(cls, dim: int = 1, closed: bool = True) -> "Domain":
        return cls((), dim, closed)

    # -- queries ------------------------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    @property
    def is_bounded(self) -> bool:
        return all(math.isfinite(lo) and math.isfinite(hi) for box in self.boxes for lo, hi in box)

    @property
    def volume(self) -> float:
        return sum(math.prod(hi - lo for lo, hi in box) for box in self.boxes)

    def _as_points(self, x) -> np.ndarray:
        points = np.atleast_2d(np.asarray(x, dtype=float))
        if points.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"Point dimension {points.shape[1]} does not match domain dimension {self.dim}"
            )
        return points

    def _box_masks(self, points: np.ndarray) -> List[np.ndarray]:
        masks = []
        for box in self.boxes:
            lo = np.array([interval[0] for interval in box])
            hi = np.array([interval[1] for interval in box])
            if self.closed:
                inside = np.all((points >= lo) & (points <= hi), axis=1)
            else:
                inside = np.all((points > lo) & (points < hi), axis=1)
            masks.append(inside)
        return masks

    def contains_points(self, points) -> np.ndarray:
        points = self._as_points(points)
        mask = np.zeros(points.shape[0], dtype=bool)
        for inside in self._box_masks(points):
            mask |= inside
        return mask

    def contains(self, x) -> bool:
        point = np.asarray(x, dtype=float).reshape(-1)
        return bool(self.contains_points(point[None, :])[0])

    def distance_to_boundary_points(self, points) -> np.ndarray:
        """Vectorized l-infinity distance to the complement; ``nan`` outside."""
        points = self._as_points(points)
        distances = np.full(points.shape[0], np.nan)
        for box, inside in zip(self.boxes, self._box_masks(points)):
            if not inside.any():
                continue
            lo = np.array([interval[0] for interval in box])
            hi = np.array([interval[1] for interval in box])
            selected = points[inside]
            with np.errstate(invalid="ignore"):
                gaps = np.minimum(selected - lo, hi - selected)
            distances[inside] = np.min(gaps, axis=1)
        return distances

    def is_subdomain_of(self, other: "Domain") -> bool:
        """Box-wise inclusion; every box of ``self`` lies in one box of ``other``."""
        if self.dim != other.dim:
            raise DimensionMismatchError("Domains have different dimensions")
        for box in self.boxes:
            if not any(_box_within(box, outer, strict=self.closed and not other.closed) for outer in other.boxes):
                return False
        return True

    def windowed_boxes(self, window: float) -> List[Box]:
        """Boxes with infinite ends replaced so that every box is bounded."""
        return [tuple(_window_interval(lo, hi, window) for lo, hi in box) for box in self.boxes]

    def bounding_box(self, window: float = math.inf) -> Box:
        boxes = self.windowed_boxes(window) if math.isfinite(window) else list(self.boxes)
        if not boxes:
            raise EmptyDomainError("Empty domain has no bounding box")
        return tuple(
            (min(box[axis][0] for box in boxes), max(box[axis][1] for box in boxes))
            for axis in range(self.dim)
        )

    # -- serialization ------------------------------------------------------------------

    def to_dict(self) -> dict:
        data = {
            "dim": self.dim,
            "boxes": [[[_encode_bound(lo), _encode_bound(hi)] for lo, hi in box] for box in self.boxes],
        }
        if self.closed:
            data["closed"] = True
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Domain":
        boxes = tuple(
            tuple((_decode_bound(lo), _decode_bound(hi)) for lo, hi in box) for box in data["boxes"]
        )
        dim = int(data.get("dim", len(boxes[0]) if boxes else 1))
        return cls(boxes, dim, bool(data.get("closed", False)))


def _boxes_overlap(first: Box, second: Box) -> bool:
    return all(max(a[0], b[0]) < min(a[1], b[1]) for a, b in zip(first, second))


def _box_within(inner: Box, outer: Box, strict: bool) -> bool:
    for (lo, hi), (outer_lo, outer_hi) in zip(inner, outer):
        if strict:
            if not (outer_lo < lo and hi < outer_hi):
                return False
        elif not (outer_lo <= lo and hi <= outer_hi):
            return False
    return True


def _window_interval(lo: float, hi: float, window: float) -> Interval:
    if math.isinf(lo) and math.isinf(hi):
        return (-window, window)
    if math.isinf(lo):
        return (hi - 2 * window, hi)
    if math.isinf(hi):
        return (lo, lo + 2 * window)
    return (lo, hi)


def contains(dom: Domain, x) -> bool:
    return dom.contains(x)


def distance_to_boundary(dom: Domain, x) -> float:
    point = np.asarray(x, dtype=float).reshape(-1)
    if not dom.contains(point):
        raise OutsideDomainError(f"Point {point.tolist()} is not in the domain")
    return float(dom.distance_to_boundary_points(point[None, :])[0])


def shrink_clip(dom: Domain, eps: float) -> Domain:
    """The closed set of points at distance >= eps from the boundary and within 1/eps of 0."""
    if eps <= 0:
        raise DomainError(f"Shrink radius must be positive, got {eps}")
    radius = 1.0 / eps
    shrunk = []
    for box in dom.boxes:
        intervals = []
        for lo, hi in box:
            new_lo = max(lo + eps, -radius)
            new_hi = min(hi - eps, radius)
            if new_lo >= new_hi:
                break
            intervals.append((new_lo, new_hi))
        else:
            shrunk.append(tuple(intervals))
    return Domain(tuple(shrunk), dom.dim, closed=True)


@dataclass(frozen=True)
class NearStandardPoint:
    """A standard base point plus an infinitesimal displacement per axis."""

    base: Tuple[float, ...]
    offset: Tuple[AsymptoticScalar, ...] = field(default=())

    def __post_init__(self):
        base = tuple(float(value) for value in self.base)
        offset = tuple(self.offset) or tuple(AsymptoticScalar.zero() for _ in base)
        if len(offset) != len(base):
            raise DimensionMismatchError("Offset and base point have different dimensions")
        for component in offset:
            if classify(component) not in (Magnitude.ZERO, Magnitude.INFINITESIMAL):
                raise DomainError(f"Offset component {component!r} is not infinitesimal")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "offset", offset)

    @property
    def is_standard(self) -> bool:
        return all(component.is_zero for component in self.offset)

    def at(self, rho: float) -> np.ndarray:
        return np.array(
            [b + component.evaluate(rho).real for b, component in zip(self.base, self.offset)]
        )

    def displacement_bound(self, rho: float) -> float:
        """Upper bound on the l-infinity size of the offset at a concrete rho."""
        bound = 0.0
        for component in self.offset:
            bound = max(bound, sum(abs(complex(c)) * rho ** float(e) for e, c in component.terms))
        return bound


def sample_near_standard(
    dom: Domain,
    n_base: int,
    offset_exponents: Sequence = (1,),
    seed: int = 7,
    margin_fraction: float = 0.05,
    window: float = 2.0,
    anchors: Iterable[Sequence[float]] = (),
) -> List[NearStandardPoint]:
    """Seeded standard base points, each with a zero offset and one ``c*rho^s`` offset per exponent.

    Base points are spread round-robin over the boxes and keep a distance of at least
    ``margin_fraction`` of the (windowed) box width from the boundary. ``anchors`` are
    extra base points, such as kernel centres, which are kept when they lie in ``dom``.
    """
    if dom.is_empty:
        raise EmptyDomainError("Cannot sample near-standard points of an empty domain")
    if n_base < 1:
        raise DomainError(f"n_base must be at least 1, got {n_base}")

    rng = np.random.default_rng(seed)
    exponents = [Fraction(exponent) for exponent in offset_exponents]
    if any(exponent <= 0 for exponent in exponents):
        raise DomainError("Offset exponents must be positive")

    windowed = dom.windowed_boxes(window)
    bases = []
    for index in range(n_base):
        box = windowed[index % len(windowed)]
        base = []
        for lo, hi in box:
            margin = margin_fraction * (hi - lo)
            base.append(rng.uniform(lo + margin, hi - margin))
        bases.append(tuple(base))
    for anchor in anchors:
        anchor = tuple(float(value) for value in anchor)
        if dom.contains(anchor) and anchor not in bases:
            bases.append(anchor)

    points = []
    for base in bases:
        points.append(NearStandardPoint(base))
        for exponent in exponents:
            coefficients = rng.uniform(-1.0, 1.0, size=dom.dim)
            offset = tuple(AsymptoticScalar.monomial(exponent, float(c)) for c in coefficients)
            points.append(NearStandardPoint(base, offset))
    return points


def largest_rho(predicate: Callable[[float], bool], rho_max: float, iterations: int = 80) -> float:
    """Largest rho in (0, rho_max] with ``predicate`` true, for predicates monotone in rho."""
    if predicate(rho_max):
        return rho_max
    high = rho_max
    for _ in range(1000):
        low = 0.5 * high
        if low == 0.0:
            return 0.0
        if predicate(low):
            break
        high = low
    for _ in range(iterations):
        middle = 0.5 * (low + high)
        if predicate(middle):
            low = middle
        else:
            high = middle
    return low


def rho_threshold(dom: Domain, points: Sequence[NearStandardPoint], rho_max: float = 0.5) -> float:
    """Largest rho for which every displaced point keeps its kernel box inside the cutoff plateau.

    At such rho the cutoff of ``dom`` equals 1 on a neighbourhood of every sampled point:
    distance to the boundary of at least ``4*rho`` after displacement, and the displaced
    point plus ``rho`` inside the clipping ball of radius ``1/(3*rho)``.
    """
    if not points:
        return rho_max
    bases = np.array([point.base for point in points])
    distances = dom.distance_to_boundary_points(bases)
    if np.any(np.isnan(distances)):
        raise OutsideDomainError("A sampled base point lies outside the domain")
    norms = np.max(np.abs(bases), axis=1)

    def holds(rho: float) -> bool:
        for point, distance, norm in zip(points, distances, norms):
            shift = point.displacement_bound(rho)
            if distance < 4 * rho + shift:
                return False
            if (norm + shift + rho) * 3 * rho > 1:
                return False
        return True

    return largest_rho(holds, rho_max)


def restrict_points(points: Sequence[NearStandardPoint], dom: Domain) -> List[NearStandardPoint]:
    return [point for point in points if dom.contains(point.base)]


def grid_cells(window: Box, step: float) -> List[Box]:
    """Closed grid cells of side ``step`` covering ``window``."""
    axes = []
    for lo, hi in window:
        count = max(1, int(math.ceil((hi - lo) / step - 1e-9)))
        edges = [lo + k * step for k in range(count)]
        axes.append([(edge, min(edge + step, hi)) for edge in edges])
    cells: List[Box] = [()]
    for axis_cells in axes:
        cells = [cell + (interval,) for cell in cells for interval in axis_cells]
    return cells


def merge_cells(cells: Sequence[Box]) -> Optional[Domain]:
    if not cells:
        return None
    return Domain(tuple(cells), len(cells[0]), closed=True)
