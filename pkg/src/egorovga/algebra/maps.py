from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .domain import Domain
from ..core.exceptions import DimensionMismatchError, UnsupportedTermError

PointMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Diffeomorphism:
    """A diffeomorphism theta: X -> Y acting on point arrays of shape ``(n, dim)``.

    Affine maps ``theta(x) = A x + b`` keep ``linear`` and ``offset`` so that derivative
    terms can be transported exactly.
    """

    forward: PointMap
    inverse: PointMap
    jacobian_det: Callable[[np.ndarray], np.ndarray]
    dim: int
    name: str = "theta"
    linear: Optional[np.ndarray] = field(default=None, repr=False)
    offset: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def affine(cls, linear, offset, name: str = "affine") -> "Diffeomorphism":
        linear = np.atleast_2d(np.asarray(linear, dtype=float))
        offset = np.atleast_1d(np.asarray(offset, dtype=float))
        dim = linear.shape[0]
        if linear.shape != (dim, dim) or offset.shape != (dim,):
            raise DimensionMismatchError("Affine map needs a square matrix and a matching offset")
        determinant = float(np.linalg.det(linear))
        if determinant == 0.0:
            raise UnsupportedTermError("Affine map is not invertible")
        inverse_linear = np.linalg.inv(linear)
        return cls(
            forward=lambda x: np.atleast_2d(x) @ linear.T + offset,
            inverse=lambda y: (np.atleast_2d(y) - offset) @ inverse_linear.T,
            jacobian_det=lambda x: np.full(np.atleast_2d(x).shape[0], determinant),
            dim=dim,
            name=name,
            linear=linear,
            offset=offset,
        )

    @classmethod
    def identity(cls, dim: int = 1) -> "Diffeomorphism":
        return cls.affine(np.eye(dim), np.zeros(dim), name="identity")

    @property
    def is_affine(self) -> bool:
        return self.linear is not None

    @property
    def inverse_linear(self) -> np.ndarray:
        if not self.is_affine:
            raise UnsupportedTermError(f"{self.name} is not affine")
        return np.linalg.inv(self.linear)

    @property
    def is_axis_aligned(self) -> bool:
        """Affine with a diagonal matrix, so boxes map to boxes."""
        return self.is_affine and np.allclose(self.linear, np.diag(np.diag(self.linear)))

    def map_point(self, point) -> np.ndarray:
        return self.forward(np.asarray(point, dtype=float).reshape(1, -1))[0]

    def map_breaks(self, breaks):
        """Per-axis breakpoints transported by an axis-aligned map; empty otherwise."""
        if not self.is_axis_aligned:
            return tuple(() for _ in range(self.dim))
        return tuple(
            tuple(sorted(self.linear[i, i] * b + self.offset[i] for b in axis_breaks))
            for i, axis_breaks in enumerate(breaks)
        )

    def map_domain(self, dom: Domain) -> Domain:
        if not self.is_axis_aligned:
            raise UnsupportedTermError(f"Cannot map the boxes of a domain through {self.name}")
        boxes = []
        for box in dom.boxes:
            intervals = []
            for i, (lo, hi) in enumerate(box):
                a, b = self.linear[i, i] * lo + self.offset[i], self.linear[i, i] * hi + self.offset[i]
                intervals.append((min(a, b), max(a, b)))
            boxes.append(tuple(intervals))
        return Domain(tuple(boxes), dom.dim, dom.closed)

    def to_dict(self) -> dict:
        data = {"name": self.name, "dim": self.dim}
        if self.is_affine:
            data["linear"] = self.linear.tolist()
            data["offset"] = self.offset.tolist()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Diffeomorphism":
        if "linear" not in data:
            raise UnsupportedTermError("Only affine maps can be rebuilt from data")
        return cls.affine(data["linear"], data["offset"], data.get("name", "affine"))
