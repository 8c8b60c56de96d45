"""Linkage gadget builders.

Every gadget is a mechanism of translating rigid bodies coupled by flex
units (see mech.py).  Channel widths carry the variable values: each
variable x travels as a horizontal channel of width x+30 and a vertical
channel of width sqrt(3)*(x+30); gadget mechanics below enforce the
published behavioral contracts:

  head        flexible channel, width = flex height + 21
  restrictor  head with strut work pinning the width to [30.5, 32]
  turn        vertical channel slaved to sqrt(3) times a horizontal one
  crossover   width pass-through where two channels cross (and, in the
              same-variable version, the sqrt(3) lock as well)
  addition    w_k = w_i + w_j - 30 across three stacked channels
  inversion   x*y = 1 via a ground-pinned sliding rod between the two
              narrowed channels

The inter-gadget figure geometry is not published; struts and anchors
here are engineered to meet the stated width/height contracts exactly,
with every bar a half-integer and every fixed angle a multiple of 30
degrees (asserted at construction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import aframe as af
from .geom import Point2
from .linkage import AngleConstraint
from .mech import IDENT, Mech, MechError, Placement, elbow, snap_half

__all__ = [
    "GadgetFragment", "Instance",
    "build_a_frame", "build_flex", "build_channel_restrictor", "build_turn",
    "build_crossover", "build_addition", "build_inversion",
    "add_head", "add_turn", "add_crossover", "add_addition", "add_inversion",
    "WIDE_LO", "WIDE_HI", "VERT_LO", "VERT_HI", "W_OFF",
]

SQ3 = math.sqrt(3.0)
W_OFF = 30.0              # wide channel = variable + 30
WIDE_LO, WIDE_HI = 30.5, 32.0
VERT_LO, VERT_HI = SQ3 * WIDE_LO, SQ3 * WIDE_HI
X_REF = 1.25              # default reference variable value
D_REF = X_REF + W_OFF     # reference horizontal channel width


@dataclass
class Instance:
    """One gadget wired into a Mech: bodies, ports, and its placement rule."""

    prefix: str
    bodies: list
    ports: dict
    place: object            # callable(q: dict) -> {body: Placement}
    info: dict = field(default_factory=dict)


@dataclass
class GadgetFragment:
    """Standalone gadget: a linkage plus named attachment ports."""

    kind: str
    scale: float
    mech: Mech
    instance: Instance
    linkage: object = None

    def __post_init__(self):
        if self.linkage is None:
            ref = self.mech.realize(self.instance.place(self.info_reference()))
            self.linkage = self.mech.to_linkage(ref)

    def info_reference(self):
        return dict(self.instance.info.get("reference", {}))

    @property
    def ports(self):
        return self.instance.ports

    def realize(self, **q):
        vals = self.info_reference()
        vals.update(q)
        return self.mech.realize(self.instance.place(vals))


# --------------------------------------------------------------------------
# bare A-frame
# --------------------------------------------------------------------------

def build_a_frame(scale=1.0):
    """Hart A-frame fragment: 8 bars, 180-degree joints at B and E."""
    s = float(scale)
    m = Mech("af.")
    base = m.body("base")
    A = m.vertex(base, (0, 0), name="A")
    D = m.vertex(base, (4 * s, 0), name="D")
    names = {}
    for nm in ("B", "C", "E", "G", "H"):
        names[nm] = m.custom_vertex(name=nm)
    m.bar(A, D, 4 * s)
    m.free_bar(A, "B", 3 * s)
    m.free_bar("B", "C", 1 * s)
    m.free_bar("B", "E", 2 * s)
    m.free_bar(D, "E", 3 * s)
    m.free_bar("E", "G", 1 * s)
    m.free_bar("C", "H", 2 * s)
    m.free_bar("G", "H", 2 * s)
    m.constraints.append(AngleConstraint("B", "A", "C", 180.0, 180.0))
    m.constraints.append(AngleConstraint("E", "D", "G", 180.0, 180.0))

    def hook_factory(theta_holder):
        def hook(placements, config):
            pose = af.a_frame_pose(theta_holder["theta"], theta_holder["lean"], s)
            return {"B": pose.B, "C": pose.C, "E": pose.E, "G": pose.G,
                    "H": pose.H}
        return hook

    holder = {"theta": af.THETA_STRAIGHT, "lean": "right"}
    m.custom.append(hook_factory(holder))

    def place(q):
        holder["theta"] = q.get("theta", af.THETA_STRAIGHT)
        holder["lean"] = q.get("lean", "right")
        return {base: IDENT}

    inst = Instance("af.", [base], {"base": (A, D), "apex": ("H",)}, place,
                    {"reference": {"theta": af.THETA_STRAIGHT, "lean": "right"},
                     "kind": "a_frame", "scale": s})
    return GadgetFragment("a_frame", s, m, inst)


# --------------------------------------------------------------------------
# flex gadget
# --------------------------------------------------------------------------

def build_flex(scale=1.0):
    """Two 2x-scaled A-frames with a shared apex bar; 1-DOF vertical joint."""
    s = float(scale)
    m = Mech("fx.")
    base = m.body("base")
    apex = m.body("apex")
    h_ref = 10.0 * s
    unit = m.flex("F", s, base, Point2(0, 0), 0.0, apex, h_ref)
    lo, hi = af.flex_height_range(s)

    def place(q):
        h = q.get("h", h_ref)
        if not (lo < h <= hi + 1e-9):
            raise MechError("flex height %.6f outside (%.4f, %.4f]" % (h, lo, hi))
        return {base: IDENT, apex: Placement(Point2(0, h - h_ref))}

    v = unit.vids
    inst = Instance("fx.", [base, apex],
                    {"base": (v["A1"], v["D2"]),
                     "apex-bar": (v["H1"], v["H2"])},
                    place,
                    {"reference": {"h": h_ref}, "kind": "flex", "scale": s,
                     "flex": unit})
    return GadgetFragment("flex", s, m, inst)


# --------------------------------------------------------------------------
# channel head (flex + riser + rails); restricted variant
# --------------------------------------------------------------------------

HEAD_RISER = 21.0          # top rail rides 21 above the apex bar
HEAD_PORT_X = 42.0         # east port offset

# Restrictor strut constants.  The M-strut (two bars of 16 between
# vertically aligned anchors on the two rails) caps the width at 32; the
# N-pendant (38.5 down from the top rail) plus two bars of 8.5 to a floor
# anchor 15 east enforces the 30.5 minimum through the (8, 15, 17)
# Pythagorean triple: sqrt(17^2 - 15^2) = 8 = 38.5 - 30.5.
M_X = -5.0
M_BAR = 16.0
N_X = -22.0
N_DROP = 38.5
N_BAR = 8.5
N_FLOOR_X = -7.0


def add_head(m, pre, origin, restricted, x_ref=X_REF, port_x=HEAD_PORT_X):
    """Channel head: flex + riser + rails; optionally with restrictor struts.

    Bodies: <pre>floor (the band's bottom frame) and <pre>top (apex bar,
    riser and top rail).  The channel width is w = flex height + 21;
    restricted heads pin w to [30.5, 32] i.e. x to [1/2, 2].
    """
    o = Point2(origin)
    w_ref = x_ref + W_OFF
    h_ref = w_ref - HEAD_RISER
    floor = m.body(pre + "floor", Placement(o))
    top = m.body(pre + "top", Placement(o + Point2(0, w_ref)))

    unit = m.flex(pre + "F", 1.0, floor, Point2(0, 0), 0.0, top, h_ref,
                  apex_splits=(5.0,))
    v = unit.vids
    T0 = unit.apex_chain[1]

    # Floor rail east of the flex.
    FP = m.vertex(floor, (port_x, 0), hint="flp")
    m.bar(v["D2"], FP)
    m.fixed_angle(v["D2"], v["A2"], FP, 180.0)

    # Riser from the apex bar up to the top rail.
    T = m.vertex(top, (9.0, HEAD_RISER), hint="T")
    m.bar(T0, T, HEAD_RISER)
    m.fixed_angle(T0, v["H1"], T, 90.0)
    m.fixed_angle(T0, T, v["H2"], 90.0)
    TP = m.vertex(top, (port_x, HEAD_RISER), hint="tp")
    m.bar(T, TP)

    if restricted:
        # Floor rail west of the flex, carrying the strut anchors.
        N3 = m.vertex(floor, (N_FLOOR_X, 0), hint="N3")
        M3 = m.vertex(floor, (M_X, 0), hint="M3")
        m.bar(N3, M3)
        m.bar(M3, v["A1"])
        m.fixed_angle(M3, N3, v["A1"], 180.0)
        m.fixed_angle(v["A1"], M3, v["D1"], 180.0)
        # Top rail west of T.
        N0 = m.vertex(top, (N_X, HEAD_RISER), hint="N0")
        M1 = m.vertex(top, (M_X, HEAD_RISER), hint="M1")
        m.bar(N0, M1)
        m.bar(M1, T)
        m.fixed_angle(M1, N0, T, 180.0)
        m.fixed_angle(T, M1, TP, 180.0)
        # Pendant and the two elbow struts.
        N1 = m.vertex(top, (N_X, HEAD_RISER - N_DROP), hint="N1")
        m.bar(N0, N1, N_DROP)
        m.fixed_angle(N0, M1, N1, 90.0)
        M2 = m.custom_vertex(pre + "M2")
        N2 = m.custom_vertex(pre + "N2")
        m.free_bar(M1, M2, M_BAR)
        m.free_bar(M2, M3, M_BAR)
        m.free_bar(N1, N2, N_BAR)
        m.free_bar(N2, N3, N_BAR)

        def strut_hook(placements, config):
            return {M2: elbow(config[M1], config[M3], M_BAR, M_BAR, "left"),
                    N2: elbow(config[N1], config[N3], N_BAR, N_BAR, "right")}

        m.custom.append(strut_hook)
        ref = m.realize({b: pl for b, pl in m.bodies.items()})
        m.flex_angle(M1, T, M2, 20, 100, (ref[M1], ref[T], ref[M2]))
        m.flex_angle(M2, M1, M3, 120, 240, (ref[M2], ref[M1], ref[M3]))
        m.flex_angle(M3, M2, v["A1"], 20, 100, (ref[M3], ref[M2], ref[v["A1"]]))
        m.flex_angle(N1, N0, N2, 60, 180, (ref[N1], ref[N0], ref[N2]))
        m.flex_angle(N2, N1, N3, 120, 240, (ref[N2], ref[N1], ref[N3]))
        m.flex_angle(N3, N2, M3, 60, 180, (ref[N3], ref[N2], ref[M3]))

    def place(q):
        x = q[pre + "x"] if (pre + "x") in q else q.get("x", x_ref)
        w = x + W_OFF
        lo, hi = af.flex_height_range(1.0)
        if restricted and not (WIDE_LO - 1e-9 <= w <= WIDE_HI + 1e-9):
            raise MechError("restricted head width %.6f outside [30.5, 32]" % w)
        if not (lo < w - HEAD_RISER <= hi + 1e-9):
            raise MechError("head width %.6f infeasible" % w)
        dx = q.get(pre + "dx", q.get("dx", 0.0))
        dy = q.get(pre + "dy", q.get("dy", 0.0))
        return {floor: Placement(o + Point2(dx, dy)),
                top: Placement(o + Point2(dx, dy + w))}

    ports = {"out": (TP, FP), "out_top": TP, "out_floor": FP}
    return Instance(pre, [floor, top], ports, place,
                    {"reference": {"x": x_ref}, "kind": "restrictor" if restricted
                     else "head", "flex": unit, "T": T, "T0": T0})


def build_channel_restrictor():
    m = Mech("cr.")
    inst = add_head(m, "cr.", Point2(0, 0), restricted=True)
    inst.info["reference"] = {"x": X_REF}
    return GadgetFragment("restrictor", 1.0, m, inst)
