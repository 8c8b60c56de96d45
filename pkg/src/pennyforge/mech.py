"""Mechanism-construction framework shared by all linkage gadgets.

A gadget is assembled from rigid *bodies* (rails, corner frames, struts)
joined by *flex units*.  A flex unit is a pair of A-frames at twice the
flex's nominal scale standing on a common base line with their apexes tied
by a rigid bar; mechanically it is a prismatic joint: the apex frame can
only translate perpendicular to the base, within the non-crossing height
interval (8s, 8*sqrt(2)*s].

Bodies carry vertices at fixed local coordinates and move by translation
(plus rotation for the pivoting assemblies of the inversion gadget).  Flex
leg vertices (B, C, E, G of each A-frame) are posed on demand from the
realized base/apex anchor points.  Construction happens at a reference
state in which every bar length is asserted to be a half-integer and
every fixed angle a multiple of 30 degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import aframe as af
from .geom import Point2, ccw_angle, circle_circle_intersection
from .linkage import AngleConstraint, Bar, Linkage

__all__ = ["Placement", "FlexUnit", "Mech", "MechError", "snap_half"]


class MechError(ValueError):
    pass


def snap_half(x, what="length", tol=2e-6):
    """Round to the nearest half integer, insisting we were already there."""
    r = round(x * 2.0) / 2.0
    if abs(x - r) > tol:
        raise MechError("%s %.9f is not a half-integer" % (what, x))
    return r


def _snap_angle(x, tol=1e-6):
    r = round(x / 30.0) * 30.0
    if abs(x - r) > tol:
        raise MechError("fixed angle %.9f is not a multiple of 30 degrees" % x)
    return r % 360.0


@dataclass
class Placement:
    """Rigid placement of a body: rotation (degrees ccw) then translation."""

    t: Point2
    rot: float = 0.0

    def apply(self, local):
        if self.rot == 0.0:
            return Point2(local[0] + self.t[0], local[1] + self.t[1])
        p = Point2(local).rotated(self.rot)
        return Point2(p.x + self.t[0], p.y + self.t[1])

    def direction(self, deg):
        return Point2.polar(1.0, deg + self.rot)


IDENT = Placement(Point2(0.0, 0.0), 0.0)


@dataclass
class FlexUnit:
    fid: str
    scale: float          # nominal scale: frames are at 2*scale
    base_body: str
    base_origin: Point2   # local coords of foot A1 on the base body
    axis_deg: float       # base direction in base-body local frame
    apex_body: str
    apex_h_ref: float     # reference apex height used at construction
    lean: str
    vids: dict            # role -> vertex id for A1..H2

    @property
    def frame_scale(self):
        return 2.0 * self.scale

    def feet_local(self):
        s = self.frame_scale
        u = Point2.polar(1.0, self.axis_deg)
        o = self.base_origin
        return {
            "A1": o,
            "D1": o + u * (4 * s),
            "A2": o + u * (4 * s + af.FLEX_BASE_GAP),
            "D2": o + u * (8 * s + af.FLEX_BASE_GAP),
        }

    def apexes_local_on_base(self, h):
        s = self.frame_scale
        u = Point2.polar(1.0, self.axis_deg)
        n = u.perp()
        o = self.base_origin
        return {
            "H1": o + u * (2 * s) + n * h,
            "H2": o + u * (6 * s + af.FLEX_BASE_GAP) + n * h,
        }

    def height_range(self):
        return af.flex_height_range(self.scale)


class Mech:
    """Accumulates the vertices, bars, constraints and joints of a gadget."""

    def __init__(self, name=""):
        self.name = name
        self.body_verts = {}      # vid -> (body, local Point2)
        self.bars = []            # (u, v, length)
        self.bar_set = set()
        self.constraints = []     # AngleConstraint
        self.flexes = []          # FlexUnit
        self.bodies = {}          # body -> reference Placement
        self.custom = []          # (fn(env, pos) -> {vid: Point2}) placement hooks
        self.ports = {}           # name -> dict
        self._n = 0

    # -- construction ------------------------------------------------------

    def body(self, name, ref=IDENT):
        if name in self.bodies:
            raise MechError("duplicate body %r" % name)
        self.bodies[name] = ref
        return name

    def vid(self, hint="v"):
        self._n += 1
        return "%s%s%d" % (self.name, hint, self._n)

    def vertex(self, body, local, hint="v", name=None):
        v = name or self.vid(hint)
        if v in self.body_verts:
            raise MechError("duplicate vertex %r" % v)
        self.body_verts[v] = (body, Point2(local))
        return v

    def custom_vertex(self, hint="v", name=None):
        """Vertex positioned by a custom placement hook (body None)."""
        v = name or self.vid(hint)
        self.body_verts[v] = (None, None)
        return v

    def ref_pos(self, v):
        body, local = self.body_verts[v]
        if body is None:
            raise MechError("custom vertex %r has no reference position" % v)
        return self.bodies[body].apply(local)

    def bar(self, u, v, expect=None):
        key = frozenset((u, v))
        if key in self.bar_set:
            return
        length = self.ref_pos(u).dist(self.ref_pos(v))
        length = snap_half(length, "bar %s-%s" % (u, v))
        if expect is not None and abs(length - expect) > 1e-9:
            raise MechError("bar %s-%s: expected %s got %s" % (u, v, expect, length))
        self.bar_set.add(key)
        self.bars.append((u, v, length))

    def free_bar(self, u, v, length):
        """Bar whose endpoints live in different placement domains (no ref check)."""
        key = frozenset((u, v))
        if key in self.bar_set:
            return
        self.bar_set.add(key)
        self.bars.append((u, v, snap_half(length, "bar %s-%s" % (u, v))))

    def rail(self, body, points, hint="r", names=None, straight=True):
        """Chain of collinear bars along a rail; 180 constraints at interiors."""
        vs = []
        for i, p in enumerate(points):
            name = names[i] if names else None
            vs.append(self.vertex(body, p, hint, name))
        for a, b in zip(vs, vs[1:]):
            self.bar(a, b)
        if straight:
            for i in range(1, len(vs) - 1):
                self.fixed_angle(vs[i], vs[i - 1], vs[i + 1], 180.0)
        return vs

    def fixed_angle(self, v, a, b, expect=None):
        pv, pa, pb = self.ref_pos(v), self.ref_pos(a), self.ref_pos(b)
        val = _snap_angle(ccw_angle(pa - pv, pb - pv))
        if expect is not None and abs(val - expect % 360.0) > 1e-9:
            raise MechError("angle at %s: expected %s got %s" % (v, expect, val))
        self.constraints.append(AngleConstraint(v, a, b, val, val))

    def flex_angle(self, v, a, b, lo, hi, ref_pose=None):
        """Range constraint, auto-oriented so the reference reading is inside."""
        if ref_pose is None:
            pv, pa, pb = self.ref_pos(v), self.ref_pos(a), self.ref_pos(b)
        else:
            pv, pa, pb = ref_pose
        val = ccw_angle(pa - pv, pb - pv)
        if lo <= val <= hi:
            self.constraints.append(AngleConstraint(v, a, b, lo, hi))
        elif lo <= 360.0 - val <= hi:
            self.constraints.append(AngleConstraint(v, b, a, lo, hi))
        else:
            raise MechError("angle at %s reads %.3f, outside (%s, %s) both ways"
                            % (v, val, lo, hi))

    # -- flex units ---------------------------------------------------------

    def flex(self, fid, scale, base_body, base_origin, axis_deg, apex_body,
             h_ref, lean="right", apex_splits=(), foot_rail=True):
        """Install a flex unit; returns the FlexUnit.

        apex_splits: extra subdivision offsets (from H1, along the axis) at
        which the apex bar gets collinear joints owned by the apex body.
        foot_rail: emit the three base bars and the flexible foot/leg
        constraints (turn off when the base line is laid by the caller).
        """
        lo, hi = af.flex_height_range(scale)
        if not (lo < h_ref <= hi):
            raise MechError("flex %s reference height %.6f outside (%.4f, %.4f]"
                            % (fid, h_ref, lo, hi))
        vids = {}
        unit = FlexUnit(fid, scale, base_body, Point2(base_origin), axis_deg,
                        apex_body, h_ref, lean, vids)
        feet = unit.feet_local()
        for role, p in feet.items():
            vids[role] = self.vertex(base_body, p, fid + role)
        # Apex anchors live on the apex body: convert reference positions.
        apex_ref = unit.apexes_local_on_base(h_ref)
        apex_pl = self.bodies[apex_body]
        base_pl = self.bodies[base_body]
        for role in ("H1", "H2"):
            g = base_pl.apply(apex_ref[role])
            local = (g - apex_pl.t).rotated(-apex_pl.rot)
            vids[role] = self.vertex(apex_body, local, fid + role)
        # Leg vertices are pose-solved.
        for fr in ("1", "2"):
            for role in ("B", "C", "E", "G"):
                vids[role + fr] = self.custom_vertex(fid + role + fr)
        s = unit.frame_scale
        # Base bars.
        if foot_rail:
            self.bar(vids["A1"], vids["D1"], 4 * s)
            self.bar(vids["D1"], vids["A2"], af.FLEX_BASE_GAP)
            self.bar(vids["A2"], vids["D2"], 4 * s)
        # Apex bar, possibly subdivided.
        apex_chain = [vids["H1"]]
        u = Point2.polar(1.0, axis_deg)
        for off in sorted(apex_splits):
            g = base_pl.apply(apex_ref["H1"] + u * off)
            local = (g - apex_pl.t).rotated(-apex_pl.rot)
            apex_chain.append(self.vertex(apex_body, local, fid + "T"))
        apex_chain.append(vids["H2"])
        for a, b in zip(apex_chain, apex_chain[1:]):
            self.bar(a, b)
        for i in range(1, len(apex_chain) - 1):
            self.fixed_angle(apex_chain[i], apex_chain[i - 1], apex_chain[i + 1], 180.0)
        unit.apex_chain = apex_chain
        # Leg bars.
        for fr in ("1", "2"):
            self.free_bar(vids["A" + fr], vids["B" + fr], 3 * s)
            self.free_bar(vids["B" + fr], vids["C" + fr], s)
            self.free_bar(vids["B" + fr], vids["E" + fr], 2 * s)
            self.free_bar(vids["D" + fr], vids["E" + fr], 3 * s)
            self.free_bar(vids["E" + fr], vids["G" + fr], s)
            self.free_bar(vids["C" + fr], vids["H" + fr], 2 * s)
            self.free_bar(vids["G" + fr], vids["H" + fr], 2 * s)
        self.flexes.append(unit)
        self._flex_constraints(unit)
        return unit

    def _flex_constraints(self, unit):
        """Emit Table-2 style constraints for the flex's internal vertices."""
        v = unit.vids
        poses = self.solve_flex(unit, {b: self.bodies[b] for b in self.bodies},
                                strict=False)

        def rp(x):
            return poses[x] if x in poses else self.ref_pos(x)

        for fr in ("1", "2"):
            A, B, C = v["A" + fr], v["B" + fr], v["C" + fr]
            D, E, G, H = v["D" + fr], v["E" + fr], v["G" + fr], v["H" + fr]

            def ref(*ids):
                return tuple(rp(i) for i in ids)

            # Feet: leg against one base direction (Table 2, deg 3 row).
            self.flex_angle(A, B, D, 20, 100, ref(A, B, D))
            self.flex_angle(D, E, A, 20, 100, ref(D, E, A))
            # Interior joints of the long leg bars: straight, plus hinge.
            self.fixed_angle_custom(B, A, C, 180.0, ref(B, A, C))
            self.flex_angle(B, E, C, 20, 100, ref(B, E, C))
            self.fixed_angle_custom(E, D, G, 180.0, ref(E, D, G))
            self.flex_angle(E, B, D, 20, 100, ref(E, B, D))
            # Apex hinges (Table 2, deg 2 rows).
            self.flex_angle(C, H, B, 60, 180, ref(C, H, B))
            self.flex_angle(G, H, E, 60, 180, ref(G, H, E))
            # Apex vertex: CHG in (35, 46); apex-bar-to-C-leg apex range.
            nxt = unit.apex_chain[1] if fr == "1" else unit.apex_chain[-2]
            self.flex_angle(H, C, G, 35, 46, ref(H, C, G))
            pv, pa, pb = ref(H, nxt, C)
            val = ccw_angle(pa - pv, pb - pv)
            if 85 <= val <= 114 or 85 <= 360 - val <= 114:
                self.flex_angle(H, nxt, C, 85, 114, (pv, pa, pb))
            else:
                # Left apex reads the leftward-axis angle shifted by 180.
                self.flex_angle(H, nxt, C, 265, 294, (pv, pa, pb))

    def fixed_angle_custom(self, v, a, b, value, pose):
        pv, pa, pb = pose
        val = ccw_angle(pa - pv, pb - pv)
        if abs(val - value) > 1e-6 and abs(360.0 - val - value) > 1e-6:
            raise MechError("fixed %s at %s reads %.6f" % (value, v, val))
        self.constraints.append(AngleConstraint(v, a, b, value, value))

    # -- realization --------------------------------------------------------

    def solve_flex(self, unit, placements, strict=True):
        """Positions of one flex's leg vertices given body placements."""
        base = placements[unit.base_body]
        apex = placements[unit.apex_body]
        feet = unit.feet_local()
        A1 = base.apply(feet["A1"])
        D1 = base.apply(feet["D1"])
        A2 = base.apply(feet["A2"])
        D2 = base.apply(feet["D2"])
        H1 = apex.apply(self.body_verts[unit.vids["H1"]][1])
        H2 = apex.apply(self.body_verts[unit.vids["H2"]][1])
        s = unit.frame_scale
        u = (D1 - A1) * (1.0 / (4 * s))
        n = u.perp()
        h = (H1 - A1).dot(n)
        shear = (H1 - A1).dot(u) - 2 * s
        if strict:
            lo, hi = unit.height_range()
            if not (lo - 1e-9 < h <= hi + 1e-9):
                raise MechError("flex %s height %.9f outside (%.6f, %.6f]"
                                % (unit.fid, h, lo, hi))
            if abs(shear) > 1e-6:
                raise MechError("flex %s sheared by %.3g" % (unit.fid, shear))
            if abs((H2 - H1).norm() - (4 * s + af.FLEX_BASE_GAP)) > 1e-6:
                raise MechError("flex %s apex bar stretched" % unit.fid)
        out = {}
        for (A, D, H, fr) in ((A1, D1, H1, "1"), (A2, D2, H2, "2")):
            B, C, E, G = af.a_frame_legs(A, D, H, s, unit.lean)
            out[unit.vids["B" + fr]] = B
            out[unit.vids["C" + fr]] = C
            out[unit.vids["E" + fr]] = E
            out[unit.vids["G" + fr]] = G
        return out

    def realize(self, placements, extra=None):
        """Full vertex->point configuration from body placements."""
        config = {}
        for vid, (body, local) in self.body_verts.items():
            if body is not None:
                config[vid] = placements[body].apply(local)
        for unit in self.flexes:
            config.update(self.solve_flex(unit, placements))
        for hook in self.custom:
            config.update(hook(placements, config))
        if extra:
            config.update(extra)
        missing = [v for v in self.body_verts if v not in config]
        if missing:
            raise MechError("unplaced vertices: %s" % missing[:5])
        return config

    # -- export --------------------------------------------------------------

    def to_linkage(self, rotation_config=None):
        """Freeze into a Linkage; rotation system read off a reference config."""
        vertices = list(self.body_verts.keys())
        bars = [Bar(u, v, L) for (u, v, L) in self.bars]
        rotation = {}
        if rotation_config is not None:
            adj = {}
            for (u, v, _L) in self.bars:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
            for v, nbrs in adj.items():
                p = rotation_config[v]
                rotation[v] = sorted(
                    nbrs, key=lambda w: math.atan2(rotation_config[w][1] - p[1],
                                                   rotation_config[w][0] - p[0]))
        return Linkage(vertices, bars, list(self.constraints), rotation)


def elbow(p, q, r1, r2, side):
    """Elbow joint position: circle(p, r1) x circle(q, r2), side in {left, right}."""
    sols = circle_circle_intersection(p, r1, q, r2)
    if not sols:
        raise MechError("elbow cannot close: |pq|=%.6f vs %s+%s"
                        % (Point2(p).dist(q), r1, r2))
    if len(sols) == 1:
        return sols[0]
    return sols[0] if side == "left" else sols[1]
