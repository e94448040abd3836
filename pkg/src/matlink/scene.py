"""Resolution-independent render geometry.

``build_scene`` is a pure function of (document, grouping, layout, style):
size-1 groups become plain node glyphs, larger groups become square
matrix glyphs centered at their layout position, and inter-group
underlying edges are routed between glyph anchors (possibly merged into
width-proportional color bands).  One style set applies to every glyph.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

PALETTE = [
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
    "#b279a2", "#ff9da6", "#9d755d", "#bab0ac", "#eeca3b",
]

RAMP_LOW = (221, 238, 255)
RAMP_HIGH = (8, 48, 107)


class SceneError(ValueError):
    pass


@dataclass
class StyleConfig:
    """Global style; every matrix glyph shares this one set."""

    link_thickness: float = 1.0
    cell_size: float = 1.0
    matrix_scale: float = 1.0
    axis_labels: bool = False
    axis_label_size: float = 0.6
    node_radius: float = 0.5
    edge_mode: str = "underlying"  # or "aggregated"
    band_merge_fraction: float = 0.8
    label_char_width: float = 0.55
    # channel -> target -> attribute name; e.g. bindings["fill"]["edge"] = "type"
    bindings: dict[str, dict[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.link_thickness <= 0:
            raise SceneError("link thickness must be positive")
        if self.edge_mode not in ("underlying", "aggregated"):
            raise SceneError("unknown edge mode %r" % self.edge_mode)

    def binding(self, channel, target):
        return self.bindings.get(channel, {}).get(target)

    def to_dict(self):
        return {
            "link_thickness": self.link_thickness,
            "cell_size": self.cell_size,
            "matrix_scale": self.matrix_scale,
            "axis_labels": self.axis_labels,
            "axis_label_size": self.axis_label_size,
            "node_radius": self.node_radius,
            "edge_mode": self.edge_mode,
            "band_merge_fraction": self.band_merge_fraction,
            "label_char_width": self.label_char_width,
            "bindings": self.bindings,
        }


def style_from_dict(obj):
    known = {f for f in StyleConfig.__dataclass_fields__}
    return StyleConfig(**{k: v for k, v in obj.items() if k in known})


# -- scene items -----------------------------------------------------------


@dataclass
class NodeGlyph:
    kind: str
    group: int
    node: int
    x: float
    y: float
    radius: float
    fill: str
    label: str


@dataclass
class MatrixCell:
    row: int
    col: int
    filled: bool
    fill: str
    count: int


@dataclass
class MatrixGlyph:
    kind: str
    group: int
    cx: float
    cy: float
    side: float
    cell_size: float
    members: list[int]
    member_labels: list[str]
    cells: list[MatrixCell]
    label: str
    axis_labels: bool

    @property
    def left(self):
        return self.cx - self.side / 2.0

    @property
    def top(self):
        return self.cy - self.side / 2.0

    def cell_center(self, i, j):
        return (
            self.left + (j + 0.5) * self.cell_size,
            self.top + (i + 0.5) * self.cell_size,
        )


@dataclass
class EdgePath:
    kind: str  # "link", "band" or "aggregated"
    source_group: int
    target_group: int
    points: list[tuple[float, float]]
    width: float
    color: str
    edge_ids: list[int]


@dataclass
class SceneLabel:
    kind: str
    text: str
    x: float
    y: float
    size: float
    anchor: str


@dataclass
class Scene:
    items: list

    def to_dict(self):
        return {"items": [asdict(item) for item in self.items]}

    def matrices(self):
        return [i for i in self.items if isinstance(i, MatrixGlyph)]

    def plain_nodes(self):
        return [i for i in self.items if isinstance(i, NodeGlyph)]

    def edge_paths(self):
        return [i for i in self.items if isinstance(i, EdgePath)]


def scene_hash(scene):
    blob = json.dumps(scene.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# -- color scales ----------------------------------------------------------


def categorical_color(value, domain):
    if value is None:
        return "#999999"
    return PALETTE[sorted(domain).index(value) % len(PALETTE)]


def numeric_color(value, lo, hi):
    if value is None:
        return "#999999"
    t = 0.5 if hi == lo else (value - lo) / (hi - lo)
    rgb = tuple(
        round(a + t * (b - a)) for a, b in zip(RAMP_LOW, RAMP_HIGH)
    )
    return "#%02x%02x%02x" % rgb


def _edge_color_fn(doc, style):
    attr = style.binding("fill", "edge")
    if attr is None or attr not in doc.edge_attrs:
        return lambda eid: "#666666"
    col = doc.edge_attrs[attr]
    if col.kind == "numeric":
        present = [v for v in col.values if v is not None]
        lo, hi = (min(present), max(present)) if present else (0.0, 1.0)
        return lambda eid: numeric_color(col.values[eid], lo, hi)
    domain = {v for v in col.values if v is not None}
    return lambda eid: categorical_color(col.values[eid], domain)


def _node_color_fn(doc, style, target="node"):
    attr = style.binding("fill", target)
    if attr is None or attr not in doc.node_attrs:
        return lambda n: "#cfcfcf"
    col = doc.node_attrs[attr]
    if col.kind == "numeric":
        present = [v for v in col.values if v is not None]
        lo, hi = (min(present), max(present)) if present else (0.0, 1.0)
        return lambda n: numeric_color(col.values[n], lo, hi)
    domain = {v for v in col.values if v is not None}
    return lambda n: categorical_color(col.values[n], domain)


# -- glyph geometry --------------------------------------------------------


def matrix_side(k, style):
    """Side length of a k-member matrix glyph, labels included if shown."""
    side = k * style.cell_size * style.matrix_scale
    if style.axis_labels:
        side += 0.0  # labels hang outside the frame; the core stays square
    return side


def glyph_half_diagonal(k, style):
    if k <= 1:
        return style.node_radius
    s = matrix_side(k, style)
    return s * math.sqrt(2.0) / 2.0


def build_matrix_glyph(doc, grouping, g, cx, cy, style, group_label):
    members = grouping.members(g)
    k = len(members)
    cell = style.cell_size * style.matrix_scale
    side = matrix_side(k, style)
    ordinal = {n: i for i, n in enumerate(members)}
    counts = {}
    colors = {}
    color_of = _edge_color_fn(doc, style)
    for eid in grouping.internal_edges(g):
        _, s, t = doc.edges[eid]
        i, j = ordinal[s], ordinal[t]
        spots = {(i, j), (j, i)}
        for a, b in sorted(spots):
            counts[(a, b)] = counts.get((a, b), 0) + 1
            colors[(a, b)] = color_of(eid)
    cells = []
    for i in range(k):
        for j in range(k):
            n = counts.get((i, j), 0)
            cells.append(
                MatrixCell(
                    row=i,
                    col=j,
                    filled=n > 0,
                    fill=colors.get((i, j), "#ffffff") if n > 0 else "#ffffff",
                    count=n,
                )
            )
    return MatrixGlyph(
        kind="matrix",
        group=g,
        cx=float(cx),
        cy=float(cy),
        side=side,
        cell_size=cell,
        members=members,
        member_labels=[doc.labels[n] for n in members],
        cells=cells,
        label=group_label,
        axis_labels=style.axis_labels,
    )


def _side_of(glyph_center, other_point):
    """Pick top/bottom/left/right by best outward-normal alignment."""
    dx = other_point[0] - glyph_center[0]
    dy = other_point[1] - glyph_center[1]
    candidates = {
        "right": dx,
        "left": -dx,
        "bottom": dy,
        "top": -dy,
    }
    # deterministic tie-break by name
    return max(sorted(candidates), key=lambda s: candidates[s])


def matrix_anchor(glyph, member, toward):
    """Frame-boundary anchor for one member, on the best-aligned side."""
    i = glyph.members.index(member)
    half = glyph.side / 2.0
    coord = (i + 0.5) * glyph.cell_size
    side = _side_of((glyph.cx, glyph.cy), toward)
    if side == "right":
        return (glyph.cx + half, glyph.top + coord), side
    if side == "left":
        return (glyph.cx - half, glyph.top + coord), side
    if side == "bottom":
        return (glyph.left + coord, glyph.cy + half), side
    return (glyph.left + coord, glyph.cy - half), side


def node_anchor(glyph, toward):
    """Boundary point of a plain node disk toward the other endpoint."""
    dx = toward[0] - glyph.x
    dy = toward[1] - glyph.y
    d = math.hypot(dx, dy)
    if d == 0:
        return (glyph.x + glyph.radius, glyph.y)
    return (glyph.x + glyph.radius * dx / d, glyph.y + glyph.radius * dy / d)


# -- scene assembly --------------------------------------------------------


def build_scene(doc, grouping, layout, style=None, group_labels=None):
    """Assemble the full scene.  Deterministic for identical input."""
    from . import grouping as grouping_mod

    style = style or StyleConfig()
    group_labels = group_labels or {}

    glyphs = {}
    node_color = _node_color_fn(doc, style)
    for g in grouping.group_ids():
        members = grouping.members(g)
        cx, cy = layout.position(g)
        if len(members) == 1:
            n = members[0]
            glyphs[g] = NodeGlyph(
                kind="node",
                group=g,
                node=n,
                x=float(cx),
                y=float(cy),
                radius=style.node_radius,
                fill=node_color(n),
                label=doc.labels[n],
            )
        else:
            label = group_labels.get(g) or grouping_mod.group_label(doc, grouping, g)
            glyphs[g] = build_matrix_glyph(doc, grouping, g, cx, cy, style, label)

    if style.edge_mode == "aggregated":
        edge_items = _aggregated_edge_items(doc, grouping, glyphs, style)
    else:
        edge_items = _underlying_edge_items(doc, grouping, glyphs, style)

    labels = []
    for g in grouping.group_ids():
        glyph = glyphs[g]
        if isinstance(glyph, MatrixGlyph):
            labels.append(
                SceneLabel(
                    kind="label",
                    text=glyph.label,
                    x=glyph.cx,
                    y=glyph.cy + glyph.side / 2.0 + style.axis_label_size,
                    size=style.axis_label_size,
                    anchor="middle",
                )
            )
            if style.axis_labels:
                for i, text in enumerate(glyph.member_labels):
                    y = glyph.top + (i + 0.5) * glyph.cell_size
                    x = glyph.left + (i + 0.5) * glyph.cell_size
                    labels.append(
                        SceneLabel("label", text, glyph.left - 0.1 * glyph.cell_size,
                                   y, style.axis_label_size, "end")
                    )
                    labels.append(
                        SceneLabel("label", text, x,
                                   glyph.top - 0.1 * glyph.cell_size,
                                   style.axis_label_size, "middle")
                    )
        else:
            labels.append(
                SceneLabel(
                    kind="label",
                    text=glyph.label,
                    x=glyph.x,
                    y=glyph.y + glyph.radius + style.axis_label_size,
                    size=style.axis_label_size,
                    anchor="middle",
                )
            )

    items = []
    items.extend(edge_items)
    items.extend(glyphs[g] for g in grouping.group_ids())
    items.extend(labels)
    return Scene(items)


def _endpoint_anchor(glyphs, grouping, group, member, toward):
    glyph = glyphs[group]
    if isinstance(glyph, MatrixGlyph):
        (pt, side) = matrix_anchor(glyph, member, toward)
        return pt, side
    return node_anchor(glyph, toward), None


def route_edge(doc, grouping, glyphs, eid, style):
    """Route one inter-group underlying edge between glyph anchors."""
    _, s, t = doc.edges[eid]
    gs, gt = grouping.group_of(s), grouping.group_of(t)
    cs = _glyph_center(glyphs[gs])
    ct = _glyph_center(glyphs[gt])
    a_pt, a_side = _endpoint_anchor(glyphs, grouping, gs, s, ct)
    b_pt, b_side = _endpoint_anchor(glyphs, grouping, gt, t, cs)
    color = _edge_color_fn(doc, style)(eid)
    lo, hi = (gs, gt) if gs <= gt else (gt, gs)
    pts = [a_pt, b_pt] if gs <= gt else [b_pt, a_pt]
    return EdgePath(
        kind="link",
        source_group=lo,
        target_group=hi,
        points=[(float(x), float(y)) for x, y in pts],
        width=style.link_thickness,
        color=color,
        edge_ids=[eid],
    )


def _glyph_center(glyph):
    if isinstance(glyph, MatrixGlyph):
        return (glyph.cx, glyph.cy)
    return (glyph.x, glyph.y)


def _anchor_span(glyph):
    """Available anchor span on one side of the glyph."""
    if isinstance(glyph, MatrixGlyph):
        return glyph.side
    return 2.0 * glyph.radius


def merge_bands(paths, glyphs, style):
    """Collapse the parallel links of one group pair into color bands.

    Merging triggers when the links' total width exceeds the configured
    fraction of the smaller endpoint's anchor span; band widths are
    proportional to per-color link counts, stacked in sorted color order.
    """
    if len(paths) <= 1:
        return list(paths)
    first = paths[0]
    span = min(
        _anchor_span(glyphs[first.source_group]),
        _anchor_span(glyphs[first.target_group]),
    )
    total_width = style.link_thickness * len(paths)
    if total_width <= style.band_merge_fraction * span:
        return list(paths)
    by_color = {}
    for p in paths:
        by_color.setdefault(p.color, []).append(p)
    bands = []
    offset = -total_width / 2.0
    for color in sorted(by_color):
        members = by_color[color]
        width = style.link_thickness * len(members)
        # band path = mean of member endpoints, shifted across the bundle
        ax = sum(p.points[0][0] for p in members) / len(members)
        ay = sum(p.points[0][1] for p in members) / len(members)
        bx = sum(p.points[-1][0] for p in members) / len(members)
        by = sum(p.points[-1][1] for p in members) / len(members)
        dx, dy = bx - ax, by - ay
        d = math.hypot(dx, dy) or 1.0
        nx, ny = -dy / d, dx / d
        shift = offset + width / 2.0
        offset += width
        bands.append(
            EdgePath(
                kind="band",
                source_group=first.source_group,
                target_group=first.target_group,
                points=[
                    (ax + nx * shift, ay + ny * shift),
                    (bx + nx * shift, by + ny * shift),
                ],
                width=width,
                color=color,
                edge_ids=sorted(e for p in members for e in p.edge_ids),
            )
        )
    return bands


def _underlying_edge_items(doc, grouping, glyphs, style):
    by_pair = {}
    for pair, eids in sorted(grouping.aggregated_edges().items()):
        by_pair[pair] = [route_edge(doc, grouping, glyphs, e, style) for e in eids]
    items = []
    for pair in sorted(by_pair):
        items.extend(merge_bands(by_pair[pair], glyphs, style))
    return items


def _group_label_item(glyph, style):
    if isinstance(glyph, MatrixGlyph):
        return SceneLabel(
            kind="label",
            text=glyph.label,
            x=glyph.cx,
            y=glyph.cy + glyph.side / 2.0 + style.axis_label_size,
            size=style.axis_label_size,
            anchor="middle",
        )
    return SceneLabel(
        kind="label",
        text=glyph.label,
        x=glyph.x,
        y=glyph.y + glyph.radius + style.axis_label_size,
        size=style.axis_label_size,
        anchor="middle",
    )


def matrix_fragment(doc, grouping, layout, g, style=None):
    """Static scene of one group's matrix depiction (glyph + label)."""
    from . import grouping as grouping_mod

    style = style or StyleConfig()
    cx, cy = layout.position(g)
    label = grouping_mod.group_label(doc, grouping, g)
    glyph = build_matrix_glyph(doc, grouping, g, cx, cy, style, label)
    return Scene([glyph, _group_label_item(glyph, style)])


def node_link_fragment(doc, grouping, g, member_positions, style=None):
    """Static scene of one group's members drawn as a plain node-link
    diagram at the given positions (the pre-aggregation depiction).

    Glyph ``group`` ids are the underlying node ids, matching the
    singleton groups the members would form after a split.
    """
    style = style or StyleConfig()
    members = grouping.members(g)
    node_color = _node_color_fn(doc, style)
    glyphs = {}
    for n in members:
        x, y = member_positions[n]
        glyphs[n] = NodeGlyph(
            kind="node",
            group=n,
            node=n,
            x=float(x),
            y=float(y),
            radius=style.node_radius,
            fill=node_color(n),
            label=doc.labels[n],
        )
    color_of = _edge_color_fn(doc, style)
    edges = []
    for eid in grouping.internal_edges(g):
        _, s, t = doc.edges[eid]
        a = node_anchor(glyphs[s], (glyphs[t].x, glyphs[t].y))
        b = node_anchor(glyphs[t], (glyphs[s].x, glyphs[s].y))
        lo, hi = (s, t) if s <= t else (t, s)
        pts = [a, b] if s <= t else [b, a]
        edges.append(
            EdgePath(
                kind="link",
                source_group=lo,
                target_group=hi,
                points=[(float(x), float(y)) for x, y in pts],
                width=style.link_thickness,
                color=color_of(eid),
                edge_ids=[eid],
            )
        )
    labels = [_group_label_item(glyphs[n], style) for n in members]
    return Scene(edges + [glyphs[n] for n in members] + labels)


def aggregated_edge_geometry(doc, grouping, glyphs, pair, eids, style):
    """Single segment between group anchors, width bound to multiplicity."""
    u, v = pair
    cu, cv = _glyph_center(glyphs[u]), _glyph_center(glyphs[v])
    gu, gv = glyphs[u], glyphs[v]
    if isinstance(gu, MatrixGlyph):
        mid = gu.members[len(gu.members) // 2]
        a_pt, _ = matrix_anchor(gu, mid, cv)
    else:
        a_pt = node_anchor(gu, cv)
    if isinstance(gv, MatrixGlyph):
        mid = gv.members[len(gv.members) // 2]
        b_pt, _ = matrix_anchor(gv, mid, cu)
    else:
        b_pt = node_anchor(gv, cu)
    color = _edge_color_fn(doc, style)(eids[0])
    return EdgePath(
        kind="aggregated",
        source_group=u,
        target_group=v,
        points=[a_pt, b_pt],
        width=style.link_thickness * len(eids),
        color=color,
        edge_ids=sorted(eids),
    )


def _aggregated_edge_items(doc, grouping, glyphs, style):
    items = []
    for pair, eids in sorted(grouping.aggregated_edges().items()):
        items.append(aggregated_edge_geometry(doc, grouping, glyphs, pair, eids, style))
    return items
