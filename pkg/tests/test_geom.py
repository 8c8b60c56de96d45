import math

import pytest
from hypothesis import given, strategies as st

from pennyforge.geom import (DEFAULT_TOL, Point2, Tolerance, angle_at,
                             circle_circle_intersection,
                             segments_properly_intersect)


class TestCircleIntersection:
    def test_tangent(self):
        pts = circle_circle_intersection(Point2(0, 0), 1, Point2(2, 0), 1)
        assert len(pts) == 1
        assert pts[0].dist(Point2(1, 0)) < 1e-12

    def test_two_points_x_coordinate(self):
        # Hand-solved: x^2+y^2=4, (x-4)^2+y^2=9  =>  8x = 16-9+4 = 11, x = 11/8.
        pts = circle_circle_intersection(Point2(0, 0), 2, Point2(4, 0), 3)
        assert len(pts) == 2
        for p in pts:
            assert abs(p.x - 11.0 / 8.0) < 1e-12

    def test_left_first_ordering(self):
        pts = circle_circle_intersection(Point2(0, 0), 2, Point2(4, 0), 3)
        assert pts[0].y > 0 > pts[1].y  # left of (0,0)->(4,0) means y>0

    def test_disjoint(self):
        assert circle_circle_intersection(Point2(0, 0), 1, Point2(3, 0), 1) == []

    def test_coincident_centers(self):
        with pytest.raises(ValueError):
            circle_circle_intersection(Point2(0, 0), 1, Point2(0, 0), 1)

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.5, 4), st.floats(0.5, 4),
           st.floats(-5, 5), st.floats(-5, 5))
    def test_points_on_both_circles(self, x1, y1, r1, r2, x2, y2):
        c1, c2 = Point2(x1, y1), Point2(x2, y2)
        if c1.dist(c2) < 1e-6:
            return
        for p in circle_circle_intersection(c1, r1, c2, r2):
            assert abs(p.dist(c1) - r1) < 1e-9 * max(1.0, r1)
            assert abs(p.dist(c2) - r2) < 1e-9 * max(1.0, r2)


class TestSegments:
    def test_crossing_x(self):
        assert segments_properly_intersect((0, 0), (2, 0), (1, -1), (1, 1))

    def test_shared_endpoint_ok(self):
        assert not segments_properly_intersect((0, 0), (1, 0), (1, 0), (2, 1))

    def test_collinear_overlap(self):
        assert segments_properly_intersect((0, 0), (2, 0), (1, 0), (3, 0))

    def test_endpoint_in_interior(self):
        assert segments_properly_intersect((0, 0), (2, 0), (1, 0), (1, 5))

    def test_disjoint(self):
        assert not segments_properly_intersect((0, 0), (1, 0), (0, 1), (1, 1))

    def test_shared_endpoint_doubling_back(self):
        assert segments_properly_intersect((0, 0), (2, 0), (2, 0), (1, 0))

    @given(st.tuples(*[st.floats(-3, 3) for _ in range(8)]))
    def test_symmetric(self, coords):
        p1, p2 = Point2(coords[0], coords[1]), Point2(coords[2], coords[3])
        q1, q2 = Point2(coords[4], coords[5]), Point2(coords[6], coords[7])
        if p1.dist(p2) < 1e-3 or q1.dist(q2) < 1e-3:
            return
        assert (segments_properly_intersect(p1, p2, q1, q2) ==
                segments_properly_intersect(q1, q2, p1, p2))


class TestAngles:
    def test_quarter(self):
        assert abs(angle_at((0, 0), (1, 0), (0, 1)) - 90.0) < 1e-12

    def test_straight(self):
        assert abs(angle_at((0, 0), (1, 0), (-1, 0)) - 180.0) < 1e-12

    def test_orientation(self):
        assert abs(angle_at((0, 0), (0, 1), (1, 0)) - 270.0) < 1e-12

    def test_degenerate(self):
        with pytest.raises(ValueError):
            angle_at((0, 0), (0, 0), (1, 1))

    @given(st.floats(0.1, 359.9), st.floats(0.1, 359.9))
    def test_complement(self, a, b):
        p = Point2.polar(1.0, a)
        q = Point2.polar(2.0, b)
        t = angle_at((0, 0), p, q) + angle_at((0, 0), q, p)
        assert abs(t % 360.0) < 1e-9 or abs(t % 360.0 - 360.0) < 1e-9


def test_tolerance_ordering():
    with pytest.raises(ValueError):
        Tolerance(eq_tol=1e-3, sep_tol=1e-6)
    assert DEFAULT_TOL.eq_tol < DEFAULT_TOL.sep_tol
