"""Angle-constrained linkages and their configuration semantics.

A linkage is a simple graph with positive half-integer bar lengths, a set
of angle constraints between pairs of incident bars, and a rotation system
(cyclic order of incident bars at each vertex, i.e. a combinatorial plane
embedding).  A configuration maps vertices to points; it is valid when all
bar lengths and angle constraints are met, and non-crossing when no two
non-incident elements touch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .geom import (DEFAULT_TOL, Point2, Tolerance, angle_at,
                   segments_properly_intersect)

__all__ = [
    "Bar",
    "AngleConstraint",
    "Linkage",
    "ValidationReport",
    "Crossing",
    "validate_configuration",
    "detect_crossings",
    "realized_rotation",
    "rotation_matches",
    "linkage_to_json",
    "linkage_from_json",
    "config_to_json",
    "config_from_json",
    "is_half_integer",
]

ANGLE_TOL_DEG = 1e-7  # slack for angle comparisons, degrees


def is_half_integer(x, tol=1e-9):
    return abs(x * 2.0 - round(x * 2.0)) <= tol


@dataclass(frozen=True)
class Bar:
    u: str
    v: str
    length: float

    def key(self):
        return frozenset((self.u, self.v))

    def other(self, w):
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class AngleConstraint:
    """Constrains the ccw angle at ``vertex`` from bar (vertex,a) to bar (vertex,b).

    lo == hi pins the angle (fixed constraint); otherwise the realized
    angle must lie in [lo, hi].  Ranges are stored closed; the kinematics
    only ever produces interior values of open-ended table ranges.
    """

    vertex: str
    a: str
    b: str
    lo: float
    hi: float

    @property
    def fixed(self):
        return self.lo == self.hi


@dataclass
class Linkage:
    vertices: list
    bars: list
    angle_constraints: list = field(default_factory=list)
    rotation: dict = field(default_factory=dict)

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        seen = set()
        for b in self.bars:
            if b.u not in vset or b.v not in vset:
                raise ValueError("bar endpoint not declared: %s-%s" % (b.u, b.v))
            if b.u == b.v:
                raise ValueError("self-loop bar at %s" % b.u)
            if b.length <= 0:
                raise ValueError("non-positive bar length %s-%s" % (b.u, b.v))
            if not is_half_integer(b.length):
                raise ValueError("bar %s-%s length %r not in N/2" % (b.u, b.v, b.length))
            k = b.key()
            if k in seen:
                raise ValueError("parallel bar %s-%s" % (b.u, b.v))
            seen.add(k)
        bar_keys = seen
        for ac in self.angle_constraints:
            if (frozenset((ac.vertex, ac.a)) not in bar_keys or
                    frozenset((ac.vertex, ac.b)) not in bar_keys):
                raise ValueError("angle constraint at %s references missing bar" % ac.vertex)
            if not (0.0 < ac.lo <= ac.hi < 360.0):
                raise ValueError("angle range out of (0, 360) at %s" % ac.vertex)
        for v, order in self.rotation.items():
            nbrs = self.neighbors(v)
            if sorted(order) != sorted(nbrs):
                raise ValueError("rotation at %s inconsistent with bars" % v)

    def neighbors(self, v):
        out = []
        for b in self.bars:
            if b.u == v:
                out.append(b.v)
            elif b.v == v:
                out.append(b.u)
        return out

    def bar_map(self):
        return {b.key(): b for b in self.bars}

    def degree(self, v):
        return len(self.neighbors(v))


@dataclass
class ValidationReport:
    ok: bool
    bar_errors: list          # (u, v, specified, realized, |error|)
    angle_checks: list        # (vertex, a, b, realized, lo, hi, ok)
    rotation_mismatches: list  # vertex ids
    max_bar_error: float
    worst: str = ""

    def __bool__(self):
        return self.ok


def validate_configuration(linkage, config, tol=DEFAULT_TOL, check_rotation=True):
    """Check bar lengths, angle constraints, and (optionally) the rotation system."""
    for v in linkage.vertices:
        if v not in config:
            raise KeyError("configuration missing vertex %r" % v)

    bar_errors = []
    max_err = 0.0
    for b in linkage.bars:
        d = Point2(config[b.u]).dist(Point2(config[b.v]))
        err = abs(d - b.length)
        max_err = max(max_err, err)
        bar_errors.append((b.u, b.v, b.length, d, err))

    angle_checks = []
    for ac in linkage.angle_constraints:
        realized = angle_at(config[ac.vertex], config[ac.a], config[ac.b])
        lo, hi = ac.lo, ac.hi
        good = lo - ANGLE_TOL_DEG <= realized <= hi + ANGLE_TOL_DEG
        if not good and ac.fixed:
            # A fixed 360-lo reading of a lo constraint is the same geometry
            # only when lo == 180 (collinear); otherwise orientation matters.
            good = lo == 180.0 and abs(realized - 180.0) <= ANGLE_TOL_DEG
        angle_checks.append((ac.vertex, ac.a, ac.b, realized, lo, hi, good))

    mismatches = []
    if check_rotation and linkage.rotation:
        for v, order in linkage.rotation.items():
            if len(order) >= 3:
                if not rotation_matches(config, v, order):
                    mismatches.append(v)

    ok = (max_err <= tol.eq_tol and
          all(c[-1] for c in angle_checks) and
          not mismatches)
    worst = ""
    if max_err > tol.eq_tol:
        b = max(bar_errors, key=lambda e: e[-1])
        worst = "bar %s-%s off by %.3g" % (b[0], b[1], b[-1])
    elif any(not c[-1] for c in angle_checks):
        c = next(c for c in angle_checks if not c[-1])
        worst = "angle at %s: %.6f not in [%s, %s]" % (c[0], c[3], c[4], c[5])
    elif mismatches:
        worst = "rotation mismatch at %s" % mismatches[0]
    return ValidationReport(ok, bar_errors, angle_checks, mismatches, max_err, worst)


def realized_rotation(config, v, neighbors):
    """Neighbors of v sorted counterclockwise by realized direction."""
    p = Point2(config[v])
    return sorted(neighbors,
                  key=lambda w: math.atan2(config[w][1] - p[1], config[w][0] - p[0]))


def _cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    twice = a + a
    for i in range(n):
        if twice[i:i + n] == list(b):
            return True
    return False


def rotation_matches(config, v, stored_order):
    return _cyclic_equal(realized_rotation(config, v, list(stored_order)),
                         stored_order)


@dataclass(frozen=True)
class Crossing:
    kind: str    # "bar-bar" | "vertex-vertex" | "vertex-bar"
    items: tuple

    def __str__(self):
        return "%s: %s" % (self.kind, " / ".join(map(str, self.items)))


def _seg_point_dist(a, b, p):
    ab = b - a
    denom = ab.dot(ab)
    if denom == 0.0:
        return a.dist(p)
    t = max(0.0, min(1.0, (p - a).dot(ab) / denom))
    proj = a + ab * t
    return proj.dist(p)


def detect_crossings(linkage, config, tol=DEFAULT_TOL):
    """All crossing violations of a configuration.

    Returns a list of :class:`Crossing`: properly intersecting bar pairs,
    coincident vertex pairs, and vertices lying on non-incident bars.  The
    output is independent of vertex ordering (items are sorted).
    """
    pts = {v: Point2(config[v]) for v in linkage.vertices}
    bars = linkage.bars
    out = []

    # Spatial grid over bar bounding boxes for candidate pruning.
    cell = 32.0
    grid = {}
    boxes = []
    for i, b in enumerate(bars):
        p, q = pts[b.u], pts[b.v]
        x0, x1 = sorted((p.x, q.x))
        y0, y1 = sorted((p.y, q.y))
        boxes.append((x0, y0, x1, y1))
        for cx in range(int(x0 // cell), int(x1 // cell) + 1):
            for cy in range(int(y0 // cell), int(y1 // cell) + 1):
                grid.setdefault((cx, cy), []).append(i)

    cand = set()
    for members in grid.values():
        for ai in range(len(members)):
            for bi in range(ai + 1, len(members)):
                cand.add((min(members[ai], members[bi]),
                          max(members[ai], members[bi])))

    for i, j in sorted(cand):
        bi, bj = bars[i], bars[j]
        if bi.key() & bj.key():
            continue  # share a vertex; handled by the single-endpoint rule
        x0, y0, x1, y1 = boxes[i]
        a0, b0, a1, b1 = boxes[j]
        if x1 < a0 - tol.eq_tol or a1 < x0 - tol.eq_tol:
            continue
        if y1 < b0 - tol.eq_tol or b1 < y0 - tol.eq_tol:
            continue
        if segments_properly_intersect(pts[bi.u], pts[bi.v],
                                       pts[bj.u], pts[bj.v], tol):
            out.append(Crossing("bar-bar", (tuple(sorted((bi.u, bi.v))),
                                            tuple(sorted((bj.u, bj.v))))))

    # Bars sharing one vertex can still overlap improperly (doubling back).
    incident = {}
    for b in bars:
        incident.setdefault(b.u, []).append(b)
        incident.setdefault(b.v, []).append(b)
    for v, blist in incident.items():
        for i in range(len(blist)):
            for j in range(i + 1, len(blist)):
                bi, bj = blist[i], blist[j]
                if len(bi.key() | bj.key()) == 3:
                    if segments_properly_intersect(pts[bi.u], pts[bi.v],
                                                   pts[bj.u], pts[bj.v], tol):
                        out.append(Crossing("bar-bar",
                                            (tuple(sorted((bi.u, bi.v))),
                                             tuple(sorted((bj.u, bj.v))))))

    # Coincident vertices.
    vgrid = {}
    for v, p in pts.items():
        vgrid.setdefault((int(p.x // 1.0), int(p.y // 1.0)), []).append(v)
    seen_pairs = set()
    for (cx, cy), vs in vgrid.items():
        near = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                near.extend(vgrid.get((cx + dx, cy + dy), ()))
        for v in vs:
            for w in near:
                if v < w and pts[v].dist(pts[w]) <= tol.sep_tol:
                    if (v, w) not in seen_pairs:
                        seen_pairs.add((v, w))
                        out.append(Crossing("vertex-vertex", (v, w)))

    # Vertex on non-incident bar.
    for v, p in pts.items():
        for cx in (int(p.x // cell),):
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    for i in grid.get((cx + dx, int(p.y // cell) + dy), ()):
                        b = bars[i]
                        if v in (b.u, b.v):
                            continue
                        if _seg_point_dist(pts[b.u], pts[b.v], p) <= tol.sep_tol:
                            out.append(Crossing("vertex-bar",
                                                (v, tuple(sorted((b.u, b.v))))))

    # De-duplicate, order deterministically.
    uniq = sorted(set(out), key=str)
    return uniq


def linkage_to_json(linkage):
    return json.dumps({
        "vertices": list(linkage.vertices),
        "bars": [{"u": b.u, "v": b.v, "len": b.length} for b in linkage.bars],
        "angles": [{"v": a.vertex, "a": a.a, "b": a.b, "lo": a.lo, "hi": a.hi}
                   for a in linkage.angle_constraints],
        "rotation": {v: list(order) for v, order in linkage.rotation.items()},
    })


def linkage_from_json(text):
    data = json.loads(text) if isinstance(text, str) else text
    return Linkage(
        vertices=list(data["vertices"]),
        bars=[Bar(b["u"], b["v"], float(b["len"])) for b in data["bars"]],
        angle_constraints=[AngleConstraint(a["v"], a["a"], a["b"],
                                           float(a["lo"]), float(a["hi"]))
                           for a in data.get("angles", [])],
        rotation={v: list(order) for v, order in data.get("rotation", {}).items()},
    )


def config_to_json(config):
    return json.dumps({v: [p[0], p[1]] for v, p in config.items()})


def config_from_json(text):
    data = json.loads(text) if isinstance(text, str) else text
    return {v: Point2(xy[0], xy[1]) for v, xy in data.items()}
