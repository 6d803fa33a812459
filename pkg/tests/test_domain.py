import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.egorovga.algebra.domain import (
    Domain,
    NearStandardPoint,
    distance_to_boundary,
    rho_threshold,
    sample_near_standard,
    shrink_clip,
)
from src.egorovga.algebra.scalars import AsymptoticScalar
from src.egorovga.core.exceptions import DomainError, EmptyDomainError, OutsideDomainError


class TestDomain:
    def test_open_interval_membership(self):
        """Given the open interval (0, 1), When points are tested, Then the endpoints are excluded."""
        dom = Domain.interval(0.0, 1.0)
        assert dom.contains([0.5])
        assert not dom.contains([1.0])
        assert not dom.contains([0.0])

    def test_overlapping_boxes_are_rejected(self):
        """Given two overlapping intervals, When a domain is built, Then DomainError is raised."""
        with pytest.raises(DomainError):
            Domain((((0.0, 2.0),), ((1.0, 3.0),)), 1)

    def test_distance_to_boundary(self):
        """Given (-1, 2), When the distance from 0 is measured, Then it is 1."""
        assert distance_to_boundary(Domain.interval(-1.0, 2.0), [0.0]) == pytest.approx(1.0)

    @pytest.mark.parametrize("point", [(0.3, 1.5), (-0.9, 0.2), (0.0, 1.0)])
    def test_distance_matches_nearest_outside_grid_point(self, point):
        """Given a box and an inside point, When the distance is measured, Then it matches the nearest outside grid point."""
        dom = Domain.box((-1.0, 1.0), (0.0, 2.0))
        axis = np.linspace(-3.0, 3.0, 601)
        grid = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
        outside = grid[~dom.contains_points(grid)]
        brute = np.min(np.max(np.abs(outside - np.asarray(point)), axis=1))
        assert distance_to_boundary(dom, point) == pytest.approx(brute, abs=0.01)

    def test_distance_outside_raises(self):
        """Given a point outside, When the distance is measured, Then OutsideDomainError is raised."""
        with pytest.raises(OutsideDomainError):
            distance_to_boundary(Domain.interval(-1.0, 2.0), [3.0])

    def test_infinite_bounds_serialize_as_text(self):
        """Given the real line, When serialized, Then the bounds are the strings -inf and inf."""
        assert Domain.real_space(1).to_dict()["boxes"] == [[["-inf", "inf"]]]


class TestShrinkClip:
    def test_bounded_interval(self):
        """Given (-1, 1), When shrunk by 1/4, Then the closed interval [-3/4, 3/4] remains."""
        shrunk = shrink_clip(Domain.interval(-1.0, 1.0), 0.25)
        assert shrunk.boxes == (((-0.75, 0.75),),)
        assert shrunk.closed

    def test_real_line_is_clipped_to_the_ball(self):
        """Given the real line, When shrunk by 1/2, Then it is clipped to [-2, 2]."""
        assert shrink_clip(Domain.real_space(1), 0.5).boxes == (((-2.0, 2.0),),)

    def test_small_domain_vanishes(self):
        """Given (0, 0.1), When shrunk by 0.1, Then nothing is left."""
        assert shrink_clip(Domain.interval(0.0, 0.1), 0.1).is_empty

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(min_value=0.01, max_value=0.9),
        st.floats(min_value=0.01, max_value=0.9),
    )
    def test_larger_radius_gives_smaller_set(self, first, second):
        """Given two radii, When a box is shrunk by both, Then the larger radius leaves a subset."""
        small, large = sorted((first, second))
        dom = Domain.box((-1.0, 2.0), (-3.0, 1.0))
        inner = shrink_clip(dom, large)
        assert inner.is_empty or inner.is_subdomain_of(shrink_clip(dom, small))

    def test_non_positive_radius_raises(self):
        """Given a zero radius, When shrinking, Then DomainError is raised."""
        with pytest.raises(DomainError):
            shrink_clip(Domain.interval(0.0, 1.0), 0.0)


class TestNearStandardPoints:
    def test_sampling_is_deterministic(self):
        """Given a fixed seed, When sampling twice, Then the same points come back."""
        dom = Domain.interval(-2.0, 2.0)
        first = sample_near_standard(dom, 4, (1, 2), seed=3)
        second = sample_near_standard(dom, 4, (1, 2), seed=3)
        assert [p.at(0.01).tolist() for p in first] == [p.at(0.01).tolist() for p in second]
        assert len(first) == 4 * 3

    def test_sampling_an_empty_domain_raises(self):
        """Given an empty domain, When sampling, Then EmptyDomainError is raised."""
        with pytest.raises(EmptyDomainError):
            sample_near_standard(Domain.empty(1), 2)

    def test_offset_must_be_infinitesimal(self):
        """Given a finite offset, When a near-standard point is built, Then DomainError is raised."""
        with pytest.raises(DomainError):
            NearStandardPoint((0.0,), (AsymptoticScalar.constant(1.0),))

    def test_rho_threshold_for_centre_point(self):
        """Given the centre of (-1, 1), When the threshold is computed, Then it is 1/4."""
        threshold = rho_threshold(Domain.interval(-1.0, 1.0), [NearStandardPoint((0.0,))])
        assert math.isclose(threshold, 0.25, rel_tol=1e-9)
