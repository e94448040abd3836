"""Staged keyframe generation for one group's node-link <-> matrix
transition.

The default choreography: duplicate every internal edge (a full matrix
shows each edge in both halves), then interpolate node positions and
edge corner points onto the matrix grid so that each edge's corner lands
exactly on its cell center, then cross-fade the curves out and the cells
in, with the corners the last part of the curve to disappear.

Plans are immutable; ``sample`` is pure.  The reverse direction is the
exact time mirror of the forward plan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from . import scene as scene_mod


class AnimationError(ValueError):
    pass


@dataclass(frozen=True)
class AnimationSpec:
    edge_depiction: str = "curve"  # or "polyline"
    node_placement: str = "diagonal"  # or "sides"
    matrix_extent: str = "full"  # or "upper-half"
    sequencing: str = "simultaneous"  # or "per-edge", "per-node"
    accelerate: bool = False
    accel_ratio: float = 0.85
    duration: float = 0.5
    direction: str = "to-matrix"  # or "to-node-link"
    stage_split: tuple[float, float, float] = (0.15, 0.55, 0.30)

    def __post_init__(self):
        if self.duration <= 0:
            raise AnimationError("duration must be positive")
        if self.edge_depiction not in ("curve", "polyline"):
            raise AnimationError("unknown edge depiction %r" % self.edge_depiction)
        if self.node_placement not in ("diagonal", "sides"):
            raise AnimationError("unknown node placement %r" % self.node_placement)
        if self.matrix_extent not in ("full", "upper-half"):
            raise AnimationError("unknown matrix extent %r" % self.matrix_extent)
        if self.sequencing not in ("simultaneous", "per-edge", "per-node"):
            raise AnimationError("unknown sequencing %r" % self.sequencing)
        if self.direction not in ("to-matrix", "to-node-link"):
            raise AnimationError("unknown direction %r" % self.direction)
        if abs(sum(self.stage_split) - 1.0) > 1e-9 or min(self.stage_split) <= 0:
            raise AnimationError("stage split must be positive and sum to 1")
        if not 0 < self.accel_ratio <= 1:
            raise AnimationError("acceleration ratio must be in (0, 1]")

    def to_dict(self):
        return {
            "edge_depiction": self.edge_depiction,
            "node_placement": self.node_placement,
            "matrix_extent": self.matrix_extent,
            "sequencing": self.sequencing,
            "accelerate": self.accelerate,
            "accel_ratio": self.accel_ratio,
            "duration": self.duration,
            "direction": self.direction,
            "stage_split": list(self.stage_split),
        }


EXPERT_DURATION = 0.5
NOVICE_DURATION = 3.0


def spec_from_dict(obj):
    known = set(AnimationSpec.__dataclass_fields__)
    kwargs = {k: v for k, v in obj.items() if k in known}
    if "stage_split" in kwargs:
        kwargs["stage_split"] = tuple(kwargs["stage_split"])
    return AnimationSpec(**kwargs)


@dataclass
class KfNode:
    node: int
    copy: str  # "main", "row" or "col"
    x: float
    y: float
    radius: float
    fill: str
    opacity: float


@dataclass
class KfEdge:
    eid: int
    copy: str  # "primary" or "mirror"
    points: list
    corner: object  # (x, y) or None
    corner_opacity: float
    opacity: float
    width: float
    color: str
    curved: bool


@dataclass
class Keyframe:
    t: float
    nodes: list
    edges: list
    matrix: object  # MatrixGlyph or None
    matrix_opacity: float
    scene: object = None  # exact static Scene at the endpoints


def sequence_schedule(spec, count):
    """Contiguous element time slots over the interpolation stage.

    Returned as (start, end) pairs in local stage time [0, 1].  With
    acceleration the durations form a decreasing geometric progression.
    """
    if count < 1:
        raise AnimationError("element count must be >= 1")
    if spec.accelerate:
        ratio = spec.accel_ratio
        durations = [ratio**k for k in range(count)]
    else:
        durations = [1.0] * count
    total = sum(durations)
    slots = []
    start = 0.0
    for d in durations:
        end = start + d / total
        slots.append((start, end))
        start = end
    slots[-1] = (slots[-1][0], 1.0)
    return slots


def _lerp(a, b, v):
    return (a[0] + (b[0] - a[0]) * v, a[1] + (b[1] - a[1]) * v)


def _slot_progress(slots, idx, u):
    t0, t1 = slots[idx]
    if t1 <= t0:
        return 1.0 if u >= t1 else 0.0
    return min(1.0, max(0.0, (u - t0) / (t1 - t0)))


def circular_positions(members, center, radius):
    """Default node-link sublayout: members on a circle in member order."""
    cx, cy = center
    n = len(members)
    out = {}
    for k, m in enumerate(members):
        angle = 2.0 * math.pi * k / n
        out[m] = (cx + radius * math.cos(angle), cy + radius * math.sin(angle))
    return out


class AnimationPlan:
    """Parameterized keyframe function t in [0,1] -> Keyframe."""

    def __init__(self, doc, grouping, layout, g, spec=None, style=None,
                 source_positions=None):
        members = grouping.members(g)
        if len(members) < 2:
            raise AnimationError("group must have at least 2 members")
        self.spec = spec or AnimationSpec()
        self.style = style or scene_mod.StyleConfig()
        self.group = g
        self.members = members
        self._ordinal = {n: i for i, n in enumerate(members)}

        self.target_scene = scene_mod.matrix_fragment(doc, grouping, layout, g, self.style)
        self.glyph = self.target_scene.items[0]
        if source_positions is None:
            radius = scene_mod.glyph_half_diagonal(len(members), self.style)
            source_positions = circular_positions(
                members, (self.glyph.cx, self.glyph.cy), radius)
        self.source_positions = {n: tuple(source_positions[n]) for n in members}
        self.source_scene = scene_mod.node_link_fragment(
            doc, grouping, g, self.source_positions, self.style)

        self._node_fill = {
            item.node: item.fill for item in self.source_scene.plain_nodes()}
        self._edges = []
        color_of = scene_mod._edge_color_fn(doc, self.style)
        for eid in grouping.internal_edges(g):
            _, s, t = doc.edges[eid]
            i, j = self._ordinal[s], self._ordinal[t]
            if i > j:
                i, j = j, i
                s, t = t, s
            self._edges.append((eid, s, t, i, j, color_of(eid)))

        split = self.spec.stage_split
        self._ta = split[0]
        self._tb = split[0] + split[1]

        if self.spec.sequencing == "per-node":
            self._node_slots = sequence_schedule(self.spec, len(members))
            self._edge_slots = None
        elif self.spec.sequencing == "per-edge":
            self._node_slots = None
            self._edge_slots = sequence_schedule(self.spec, max(1, len(self._edges)))
        else:
            self._node_slots = None
            self._edge_slots = None

    # -- grid geometry -----------------------------------------------------

    def _diag_pos(self, i):
        return self.glyph.cell_center(i, i)

    def _row_pos(self, i):
        return (self.glyph.left - 0.5 * self.glyph.cell_size,
                self.glyph.top + (i + 0.5) * self.glyph.cell_size)

    def _col_pos(self, i):
        return (self.glyph.left + (i + 0.5) * self.glyph.cell_size,
                self.glyph.top - 0.5 * self.glyph.cell_size)

    def _node_progress(self, i, u):
        if self._node_slots is not None:
            return _slot_progress(self._node_slots, i, u)
        return u

    def _edge_progress(self, edge_index, i, j, u):
        if self._edge_slots is not None:
            return _slot_progress(self._edge_slots, edge_index, u)
        if self._node_slots is not None:
            # an edge moves with its later-scheduled endpoint
            return _slot_progress(self._node_slots, max(i, j), u)
        return u

    # -- sampling ----------------------------------------------------------

    def sample(self, t):
        if not 0.0 <= t <= 1.0:
            raise AnimationError("t=%r outside [0, 1]" % t)
        if self.spec.direction == "to-node-link":
            kf = self._sample_forward(1.0 - t)
            return replace(kf, t=t)
        return self._sample_forward(t)

    def _sample_forward(self, t):
        if t <= 0.0:
            return Keyframe(0.0, [], [], None, 0.0, scene=self.source_scene)
        if t >= 1.0:
            return Keyframe(1.0, [], [], self.glyph, 1.0, scene=self.target_scene)

        duplicated = self.spec.matrix_extent == "full"
        if t < self._ta:
            stage, u = "A", t / self._ta
        elif t < self._tb:
            stage, u = "B", (t - self._ta) / (self._tb - self._ta)
        else:
            stage, u = "C", (t - self._tb) / (1.0 - self._tb)

        nodes = self._sample_nodes(stage, u)
        node_pos = {(n.node, n.copy): (n.x, n.y) for n in nodes}
        edges = self._sample_edges(stage, u, node_pos, duplicated)
        if stage == "C":
            matrix, matrix_op = self.glyph, u
        else:
            matrix, matrix_op = self.glyph, 0.0
        return Keyframe(t, nodes, edges, matrix, matrix_op)

    def _sample_nodes(self, stage, u):
        radius = self.style.node_radius
        nodes = []
        sides = self.spec.node_placement == "sides"
        for i, n in enumerate(self.members):
            src = self.source_positions[n]
            fill = self._node_fill[n]
            if stage == "A":
                v = 0.0
            elif stage == "B":
                v = self._node_progress(i, u)
            else:
                v = 1.0
            opacity = 1.0 if stage != "C" else max(0.0, 1.0 - u)
            if sides:
                nodes.append(KfNode(n, "row", *_lerp(src, self._row_pos(i), v),
                                    radius=radius, fill=fill, opacity=opacity))
                nodes.append(KfNode(n, "col", *_lerp(src, self._col_pos(i), v),
                                    radius=radius, fill=fill, opacity=opacity))
            else:
                nodes.append(KfNode(n, "main", *_lerp(src, self._diag_pos(i), v),
                                    radius=radius, fill=fill, opacity=opacity))
        return nodes

    def _edge_endpoint(self, node, ordinal, node_pos, which):
        if self.spec.node_placement == "sides":
            return node_pos[(node, which)]
        return node_pos[(node, "main")]

    def _sample_edges(self, stage, u, node_pos, duplicated):
        curved = self.spec.edge_depiction == "curve"
        width = self.style.link_thickness
        edges = []
        upper_only = self.spec.matrix_extent == "upper-half"
        for idx, (eid, s, t, i, j, color) in enumerate(self._edges):
            if stage == "A":
                v = 0.0
            elif stage == "B":
                v = self._edge_progress(idx, i, j, u)
            else:
                v = 1.0
            a = self._edge_endpoint(s, i, node_pos, "row")
            b = self._edge_endpoint(t, j, node_pos, "col")
            mid = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
            corner = _lerp(mid, self.glyph.cell_center(i, j), v)
            if stage == "C":
                body_op = max(0.0, 1.0 - u / 0.6)
                corner_op = max(0.0, 1.0 - max(0.0, u - 0.4) / 0.6)
            else:
                body_op = corner_op = 1.0
            edges.append(KfEdge(eid, "primary", [a, corner, b], corner,
                                corner_op, body_op, width, color, curved))
            if duplicated and not upper_only:
                a2 = self._edge_endpoint(t, j, node_pos, "row")
                b2 = self._edge_endpoint(s, i, node_pos, "col")
                mid2 = ((a2[0] + b2[0]) / 2.0, (a2[1] + b2[1]) / 2.0)
                corner2 = _lerp(mid2, self.glyph.cell_center(j, i), v)
                if stage == "A":
                    dup_op, dup_corner_op = u, u
                else:
                    dup_op, dup_corner_op = body_op, corner_op
                edges.append(KfEdge(eid, "mirror", [a2, corner2, b2], corner2,
                                    dup_corner_op, dup_op, width, color, curved))
        return edges


def plan_transition(doc, grouping, layout, g, spec=None, style=None,
                    source_positions=None):
    """Build an immutable transition plan for group ``g``."""
    return AnimationPlan(doc, grouping, layout, g, spec, style, source_positions)


def sample(plan, t):
    """Sample a plan at t in [0, 1]."""
    return plan.sample(t)
