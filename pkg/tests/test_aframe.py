import math

import pytest

from pennyforge import aframe as af
from pennyforge.geom import Point2


def bar_lengths_ok(pose, s=1.0, tol=1e-9):
    p = pose
    checks = [
        (p.A.dist(p.B), 3 * s), (p.B.dist(p.C), 1 * s), (p.B.dist(p.E), 2 * s),
        (p.D.dist(p.E), 3 * s), (p.E.dist(p.G), 1 * s), (p.C.dist(p.H), 2 * s),
        (p.G.dist(p.H), 2 * s), (p.A.dist(p.D), 4 * s),
    ]
    return all(abs(got - want) <= tol * max(1.0, s) for got, want in checks)


class TestPose:
    def test_straight_configuration(self):
        p = af.a_frame_pose(af.THETA_STRAIGHT)
        assert p.H.dist(Point2(2, 4 * math.sqrt(2))) < 1e-9
        assert p.C.dist(Point2(4 / 3, 8 * math.sqrt(2) / 3)) < 1e-9
        assert p.B.dist(Point2(1, 2 * math.sqrt(2))) < 1e-9
        assert p.E.dist(Point2(3, 2 * math.sqrt(2))) < 1e-9
        assert bar_lengths_ok(p)

    def test_degenerate_boundary(self):
        p = af.a_frame_pose(af.THETA_FLAT)
        assert p.E.dist(Point2(4, 3)) < 1e-9
        assert p.G.dist(Point2(4, 4)) < 1e-9
        assert p.H.dist(Point2(2, 4)) < 1e-9
        assert p.C.dist(Point2(3.2, 2.4)) < 1e-9
        assert p.B.dist(Point2(2.4, 1.8)) < 1e-9

    def test_bisector_everywhere(self):
        for i in range(200):
            tr = 20 + (af.THETA_STRAIGHT - 20) * i / 199
            tl = af.THETA_STRAIGHT + (88 - af.THETA_STRAIGHT) * i / 199
            for theta, lean in ((tr, "right"), (tl, "left")):
                p = af.a_frame_pose(theta, lean)
                assert abs(p.H.x - 2.0) <= 1e-9
                assert bar_lengths_ok(p)

    def test_scale_2(self):
        p = af.a_frame_pose(af.THETA_STRAIGHT, scale=2.0)
        assert abs(p.H.y - 8 * math.sqrt(2)) < 1e-9
        assert bar_lengths_ok(p, 2.0)

    def test_two_pose_property(self):
        # For h strictly inside (4, 4*sqrt(2)) both branches close, and they
        # are mirror images under x -> 4-x with the vertex relabeling C<->G.
        h = 5.0
        tr = af.theta_for_height(h, lean="right")
        tl = af.theta_for_height(h, lean="left")
        pr = af.a_frame_pose(tr, "right")
        pl = af.a_frame_pose(tl, "left")
        assert abs(pr.H.y - h) < 1e-9 and abs(pl.H.y - h) < 1e-9
        assert pr.C.dist(Point2(4 - pl.G.x, pl.G.y)) < 1e-9
        assert pr.E.dist(Point2(4 - pl.B.x, pl.B.y)) < 1e-9

    def test_chg_equals_ahd(self):
        for i in range(50):
            t = 40 + 30 * i / 49
            p = af.a_frame_pose(min(t, af.THETA_STRAIGHT))
            chg = abs(math.degrees(
                math.atan2((p.C - p.H).cross(p.G - p.H), (p.C - p.H).dot(p.G - p.H))))
            ahd = abs(math.degrees(
                math.atan2((p.A - p.H).cross(p.D - p.H), (p.A - p.H).dot(p.D - p.H))))
            assert abs(chg - ahd) < 1e-9


class TestHeightInversion:
    def test_roundtrip(self):
        for h in (4.05, 4.5, 5.0, 5.5, 5.65):
            t = af.theta_for_height(h)
            assert abs(af.a_frame_pose(t).H.y - h) < 1e-9

    def test_monotone(self):
        hs = [af.a_frame_pose(20 + (af.THETA_STRAIGHT - 20) * i / 99).H.y
              for i in range(100)]
        assert all(b > a for a, b in zip(hs, hs[1:]))

    def test_out_of_range(self):
        with pytest.raises(af.PoseInfeasible):
            af.theta_for_height(4 * math.sqrt(2) + 1e-3)


class TestLegsFromAnchors:
    def test_matches_forward(self):
        for t in (40.0, 50.0, 60.0, 70.0):
            p = af.a_frame_pose(t)
            B, C, E, G = af.a_frame_legs(p.A, p.D, p.H, 1.0, "right")
            assert B.dist(p.B) < 1e-9
            assert C.dist(p.C) < 1e-9
            assert E.dist(p.E) < 1e-9
            assert G.dist(p.G) < 1e-9

    def test_left_branch(self):
        for t in (75.0, 80.0, 85.0, 88.0):
            p = af.a_frame_pose(t, "left")
            B, C, E, G = af.a_frame_legs(p.A, p.D, p.H, 1.0, "left")
            assert C.dist(p.C) < 1e-9 and G.dist(p.G) < 1e-9

    def test_translated_rotated(self):
        p = af.a_frame_pose(55.0)
        off = Point2(10, -3)
        rot = 30.0
        A, D, H = (q.rotated(rot) + off for q in (p.A, p.D, p.H))
        B, C, E, G = af.a_frame_legs(A, D, H, 1.0, "right")
        assert B.dist(p.B.rotated(rot) + off) < 1e-9
        assert G.dist(p.G.rotated(rot) + off) < 1e-9


class TestApexAngles:
    def test_ranges_over_restricted_sweep(self):
        # Restricted flex poses: unit-frame heights in [4.75, 5.5].
        for i in range(60):
            h = 4.75 + 0.75 * i / 59
            t = af.theta_for_height(h)
            a, b, g = af.apex_angles(af.a_frame_pose(t))
            assert 85 < a < 114
            assert 35 < b < 46

    def test_left_matches_right(self):
        ar = af.apex_angles(af.a_frame_pose(af.theta_for_height(5.1, lean="right")))
        al = af.apex_angles(af.a_frame_pose(
            af.theta_for_height(5.1, lean="left"), "left"))
        for x, y in zip(ar, al):
            assert abs(x - y) < 1e-9


def test_flex_constants():
    assert af.flex_width(1.0) == 18.0
    assert af.flex_width(1.5) == 26.0
    assert af.flex_width(2.0) == 34.0
    assert af.flex_apex_bar_length(1.0) == 10.0
    lo, hi = af.flex_height_range(1.0)
    assert lo == 8.0 and abs(hi - 8 * math.sqrt(2)) < 1e-12
    lo, hi = af.flex_height_range(2.0)
    assert abs(hi - 16 * math.sqrt(2)) < 1e-12
