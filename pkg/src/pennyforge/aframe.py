"""Closed-form kinematics of the straight-line A-frame linkage.

The unit-scale frame has base A=(0,0), D=(4,0); a bar of length 4 from A
through the internal joint B (|AB|=3) to C; a bar of length 4 from D
through E (|DE|=3) to G; a coupler B-E of length 2; and two apex bars
C-H, G-H of length 2.  As C circles A, the apex H travels on the vertical
line x=2 (the perpendicular bisector of the base).  All coordinates come
from at most two circle intersections, so poses are exact to rounding.

A "flex" couples two of these frames (scaled 2x relative to the flex's
nominal scale, side by side with a base gap of 2) through a rigid apex
bar, yielding a pure vertical-translation joint used by every gadget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geom import Point2, circle_circle_intersection

__all__ = [
    "AFramePose",
    "THETA_STRAIGHT",
    "THETA_FLAT",
    "a_frame_pose",
    "a_frame_legs",
    "theta_for_height",
    "height_range",
    "apex_angles",
    "FLEX_BASE_GAP",
    "flex_width",
    "flex_height_range",
    "flex_apex_bar_length",
]

# Drive angle of the symmetric (tallest) configuration: cos(theta) = 1/3.
THETA_STRAIGHT = math.degrees(math.acos(1.0 / 3.0))
# Drive angle where the non-crossing regime ends (h = 4): cos(theta) = 4/5.
THETA_FLAT = math.degrees(math.acos(4.0 / 5.0))

POSE_TOL = 1e-6


class PoseInfeasible(ValueError):
    """The requested A-frame pose does not close."""


@dataclass(frozen=True)
class AFramePose:
    theta: float
    lean: str
    scale: float
    A: Point2
    B: Point2
    C: Point2
    D: Point2
    E: Point2
    G: Point2
    H: Point2

    @property
    def h(self):
        return self.H.y

    def points(self):
        return {"A": self.A, "B": self.B, "C": self.C, "D": self.D,
                "E": self.E, "G": self.G, "H": self.H}


def _pose(theta_deg, s):
    A = Point2(0.0, 0.0)
    D = Point2(4.0 * s, 0.0)
    C = Point2.polar(4.0 * s, theta_deg)
    B = C * 0.75
    sols = circle_circle_intersection(B, 2.0 * s, D, 3.0 * s)
    if not sols:
        raise PoseInfeasible("coupler circle empty at theta=%.6f" % theta_deg)
    E = sols[0]  # left of B->D throughout the upper assembly branch
    G = D + (E - D) * (4.0 / 3.0)
    sols = circle_circle_intersection(C, 2.0 * s, G, 2.0 * s)
    if not sols:
        raise PoseInfeasible("apex circles empty at theta=%.6f" % theta_deg)
    H = sols[0]  # left of C->G is the upper assembly branch
    if abs(H.x - 2.0 * s) > POSE_TOL * max(1.0, s):
        raise PoseInfeasible("apex off the bisector at theta=%.6f" % theta_deg)
    lean = "right" if theta_deg <= THETA_STRAIGHT else "left"
    return AFramePose(theta_deg, lean, s, A, B, C, D, E, G, H)


def a_frame_pose(theta_deg, lean="right", scale=1.0):
    """Pose the A-frame from its drive angle (angle CAD, degrees).

    The drive angle sweeps one continuous assembly branch: right-leaning
    configurations live at theta in (0, THETA_STRAIGHT] with h increasing,
    left-leaning ones at theta in [THETA_STRAIGHT, 180) with h decreasing
    (the two branches coincide at the straight configuration).  A theta on
    the wrong side of the straight configuration for the requested lean is
    rejected so infeasibility stays observable.
    """
    if lean not in ("left", "right"):
        raise ValueError("lean must be 'left' or 'right'")
    slack = 1e-9
    if lean == "right" and theta_deg > THETA_STRAIGHT + slack:
        raise PoseInfeasible("theta %.6f beyond the right-leaning branch" % theta_deg)
    if lean == "left" and theta_deg < THETA_STRAIGHT - slack:
        raise PoseInfeasible("theta %.6f below the left-leaning branch" % theta_deg)
    p = _pose(theta_deg, scale)
    return AFramePose(p.theta, lean, p.scale, p.A, p.B, p.C, p.D, p.E, p.G, p.H)


def a_frame_legs(A, D, H, scale=1.0, lean="right"):
    """Place B, C, E, G given the base anchors and apex of one A-frame.

    Inputs may be anywhere in the plane (the frame is solved in the local
    base frame), which lets flexes mounted at any multiple of 30 degrees
    reuse the same solver.  Raises PoseInfeasible when the pose does not
    close (apex out of reach, wrong branch).
    """
    A, D, H = Point2(A), Point2(D), Point2(H)
    s = scale
    base = D - A
    L = base.norm()
    if abs(L - 4.0 * s) > 1e-6 * max(1.0, s):
        raise PoseInfeasible("base length %.9f != %.9f" % (L, 4.0 * s))
    sols = circle_circle_intersection(A, 4.0 * s, H, 2.0 * s)
    if len(sols) < 2:
        if not sols:
            raise PoseInfeasible("C circles empty")
        sols = sols * 2
    # left-first ordering: index by lean.
    C = sols[1] if lean == "right" else sols[0]
    B = A + (C - A) * 0.75
    sols = circle_circle_intersection(B, 2.0 * s, D, 3.0 * s)
    if not sols:
        raise PoseInfeasible("E circles empty")
    E = sols[0]  # left of B->D on the upper assembly branch, either lean
    G = D + (E - D) * (4.0 / 3.0)
    if abs(G.dist(H) - 2.0 * s) > 1e-6 * max(1.0, s):
        raise PoseInfeasible("apex bar does not close (|GH|=%.9f)" % G.dist(H))
    return B, C, E, G


def height_range(scale=1.0, non_crossing=True):
    """Apex height range; (4s, 4*sqrt(2)*s] in the non-crossing regime."""
    s = scale
    if non_crossing:
        return 4.0 * s, 4.0 * math.sqrt(2.0) * s
    return -4.0 * math.sqrt(2.0) * s, 4.0 * math.sqrt(2.0) * s


def theta_for_height(h, scale=1.0, lean="right"):
    """Invert h(theta) on one lean branch by bisection.

    h is strictly increasing in theta on the right branch (0, THETA_STRAIGHT]
    and strictly decreasing on the left branch [THETA_STRAIGHT, 90+], which
    keeps the bisection branch-stable; tolerance is 1e-12 degrees.
    """
    s = scale

    def f(t):
        return _pose(t, s).H.y - h

    if lean == "right":
        a, b = 1e-6, THETA_STRAIGHT
        if f(b) < -1e-9 * max(1.0, s):
            raise PoseInfeasible("height %.9f above reachable maximum" % h)
        if f(a) > 0:
            raise PoseInfeasible("height %.9f below reachable minimum" % h)
        rising = True
    else:
        a, b = THETA_STRAIGHT, 179.0
        if f(a) < -1e-9 * max(1.0, s):
            raise PoseInfeasible("height %.9f above reachable maximum" % h)
        rising = False
    for _ in range(100):
        m = 0.5 * (a + b)
        try:
            fm = f(m)
        except PoseInfeasible:
            b = m
            continue
        if (fm <= 0.0) == rising:
            a = m
        else:
            b = m
        if b - a < 1e-12:
            break
    return 0.5 * (a + b)


def apex_angles(pose):
    """Angles (alpha, beta, gamma) at the apex, degrees, lean-normalized.

    alpha: from the leftward apex-bar direction to H->C;
    beta:  from H->C to H->G (the angle CHG);
    gamma: from H->G to the rightward apex-bar direction.
    For left-leaning poses the mirrored reading is reported so the three
    ranges are branch independent.
    """
    p = pose
    hc = p.C - p.H
    hg = p.G - p.H

    def ang(v):
        a = math.degrees(math.atan2(v.y, v.x))
        return a + 360.0 if a < 0 else a

    toward_c = (ang(hc) - 180.0) % 360.0  # ccw from leftward axis to HC
    beta = (ang(hg) - ang(hc)) % 360.0    # ccw from HC to HG
    toward_g = (360.0 - ang(hg)) % 360.0  # ccw from HG to rightward axis
    if p.lean == "right":
        return toward_c, beta, toward_g
    # Mirror image: the ccw readings swap roles.
    return toward_g, beta, toward_c


# --- flex constants ------------------------------------------------------
#
# A flex of nominal scale s couples two A-frames at frame scale 2s placed
# side by side with an (unscaled) base gap of 2, giving total width 16s+2
# and an apex bar of length 8s+2.  Nominal scales in use: 1 (width 18,
# heights (8, 8*sqrt(2)]), 1.5 (width 26, heights (12, 12*sqrt(2)]) and
# 2 (width 34, heights (16, 16*sqrt(2)]).

FLEX_BASE_GAP = 2.0


def flex_width(scale=1.0):
    return 16.0 * scale + FLEX_BASE_GAP


def flex_apex_bar_length(scale=1.0):
    return 8.0 * scale + FLEX_BASE_GAP


def flex_height_range(scale=1.0):
    """Open-closed non-crossing apex height interval (8s, 8*sqrt(2)*s]."""
    return 8.0 * scale, 8.0 * math.sqrt(2.0) * scale
