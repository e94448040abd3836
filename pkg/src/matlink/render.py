"""Deterministic SVG serialization of scenes and animation keyframes.

Output is standalone SVG 1.1 with a fixed z-order (edges, then glyphs,
then labels) and fixed float formatting, so identical input produces a
byte-identical file.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .scene import EdgePath, MatrixGlyph, NodeGlyph, SceneLabel


class RenderError(ValueError):
    pass


def _f(x):
    # fixed-precision, no negative zero
    v = round(float(x), 4)
    if v == 0:
        v = 0.0
    s = "%.4f" % v
    return s.rstrip("0").rstrip(".") if "." in s else s


def scene_bounds(scene, pad=2.0):
    xs, ys = [], []
    for item in scene.items:
        if isinstance(item, NodeGlyph):
            xs += [item.x - item.radius, item.x + item.radius]
            ys += [item.y - item.radius, item.y + item.radius]
        elif isinstance(item, MatrixGlyph):
            half = item.side / 2.0
            xs += [item.cx - half, item.cx + half]
            ys += [item.cy - half, item.cy + half]
        elif isinstance(item, EdgePath):
            xs += [p[0] for p in item.points]
            ys += [p[1] for p in item.points]
        elif isinstance(item, SceneLabel):
            xs.append(item.x)
            ys.append(item.y)
    if not xs:
        return (0.0, 0.0, 1.0, 1.0)
    return (min(xs) - pad, min(ys) - pad, max(xs) - min(xs) + 2 * pad,
            max(ys) - min(ys) + 2 * pad)


def _edge_svg(item, opacity=None):
    pts = " ".join("%s,%s" % (_f(x), _f(y)) for x, y in item.points)
    op = "" if opacity is None else ' stroke-opacity="%s"' % _f(opacity)
    return '<polyline class="%s" points="%s" fill="none" stroke="%s" stroke-width="%s"%s/>' % (
        item.kind, pts, item.color, _f(item.width), op)


def _node_svg(item, opacity=None):
    op = "" if opacity is None else ' opacity="%s"' % _f(opacity)
    return '<circle class="node" cx="%s" cy="%s" r="%s" fill="%s" stroke="#333333" stroke-width="%s"%s/>' % (
        _f(item.x), _f(item.y), _f(item.radius), item.fill, _f(item.radius * 0.12), op)


def _matrix_svg(item, cell_opacity=None, frame_opacity=None):
    parts = ['<g class="matrix" data-group="%d">' % item.group]
    fop = "" if frame_opacity is None else ' opacity="%s"' % _f(frame_opacity)
    parts.append(
        '<rect class="frame" x="%s" y="%s" width="%s" height="%s" fill="#ffffff" stroke="#333333" stroke-width="%s"%s/>' % (
            _f(item.left), _f(item.top), _f(item.side), _f(item.side),
            _f(item.cell_size * 0.06), fop))
    for cell in item.cells:
        x = item.left + cell.col * item.cell_size
        y = item.top + cell.row * item.cell_size
        if cell.row == cell.col:
            fill, cls = "#eeeeee", "diag"
        elif cell.filled:
            fill, cls = cell.fill, "cell"
        else:
            continue
        op = ""
        if cell_opacity is not None and cls == "cell":
            op = ' opacity="%s"' % _f(cell_opacity)
        parts.append(
            '<rect class="%s" x="%s" y="%s" width="%s" height="%s" fill="%s"%s/>' % (
                cls, _f(x), _f(y), _f(item.cell_size), _f(item.cell_size), fill, op))
    for k in range(1, len(item.members)):
        c = item.cell_size * k
        parts.append('<line class="grid" x1="%s" y1="%s" x2="%s" y2="%s" stroke="#cccccc" stroke-width="%s"/>' % (
            _f(item.left + c), _f(item.top), _f(item.left + c), _f(item.top + item.side),
            _f(item.cell_size * 0.02)))
        parts.append('<line class="grid" x1="%s" y1="%s" x2="%s" y2="%s" stroke="#cccccc" stroke-width="%s"/>' % (
            _f(item.left), _f(item.top + c), _f(item.left + item.side), _f(item.top + c),
            _f(item.cell_size * 0.02)))
    parts.append("</g>")
    return "\n".join(parts)


def _label_svg(item):
    return '<text class="label" x="%s" y="%s" font-size="%s" text-anchor="%s">%s</text>' % (
        _f(item.x), _f(item.y), _f(item.size), item.anchor, escape(item.text))


def render_svg(scene, width=800, height=600):
    """Serialize a scene to a standalone SVG byte stream."""
    if width <= 0 or height <= 0:
        raise RenderError("canvas must have positive size")
    x0, y0, w, h = scene_bounds(scene)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%d" height="%d" viewBox="%s %s %s %s">' % (
            width, height, _f(x0), _f(y0), _f(w), _f(h)),
    ]
    edges = [i for i in scene.items if isinstance(i, EdgePath)]
    glyphs = [i for i in scene.items if isinstance(i, (NodeGlyph, MatrixGlyph))]
    labels = [i for i in scene.items if isinstance(i, SceneLabel)]
    for item in edges:
        lines.append(_edge_svg(item))
    for item in glyphs:
        if isinstance(item, NodeGlyph):
            lines.append(_node_svg(item))
        else:
            lines.append(_matrix_svg(item))
    for item in labels:
        lines.append(_label_svg(item))
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def render_keyframe_svg(keyframe, width=800, height=600):
    """Serialize one animation keyframe.

    Endpoint keyframes carry an exact static scene and render through
    :func:`render_svg`; interior keyframes render their interpolated
    geometry (nodes, edge polylines/curves with opacity, fading cells).
    """
    if keyframe.scene is not None:
        return render_svg(keyframe.scene, width, height)
    if width <= 0 or height <= 0:
        raise RenderError("canvas must have positive size")

    xs, ys = [], []
    for nd in keyframe.nodes:
        xs.append(nd.x)
        ys.append(nd.y)
    for ed in keyframe.edges:
        xs += [p[0] for p in ed.points]
        ys += [p[1] for p in ed.points]
    if keyframe.matrix is not None:
        half = keyframe.matrix.side / 2.0
        xs += [keyframe.matrix.cx - half, keyframe.matrix.cx + half]
        ys += [keyframe.matrix.cy - half, keyframe.matrix.cy + half]
    if not xs:
        xs, ys = [0.0], [0.0]
    pad = 2.0
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%d" height="%d" viewBox="%s %s %s %s">' % (
            width, height, _f(x0), _f(y0), _f(w), _f(h)),
    ]
    if keyframe.matrix is not None and keyframe.matrix_opacity > 0:
        lines.append(_matrix_svg(keyframe.matrix,
                                 cell_opacity=keyframe.matrix_opacity,
                                 frame_opacity=keyframe.matrix_opacity))
    for ed in keyframe.edges:
        if ed.opacity <= 0:
            continue
        pts = " ".join("%s,%s" % (_f(x), _f(y)) for x, y in ed.points)
        if ed.curved and len(ed.points) == 3:
            (x1, y1), (cx, cy), (x2, y2) = ed.points
            d = "M %s %s Q %s %s %s %s" % (_f(x1), _f(y1), _f(cx), _f(cy), _f(x2), _f(y2))
            lines.append('<path class="anim-edge" d="%s" fill="none" stroke="%s" stroke-width="%s" stroke-opacity="%s"/>' % (
                d, ed.color, _f(ed.width), _f(ed.opacity)))
        else:
            lines.append('<polyline class="anim-edge" points="%s" fill="none" stroke="%s" stroke-width="%s" stroke-opacity="%s"/>' % (
                pts, ed.color, _f(ed.width), _f(ed.opacity)))
        if ed.corner is not None and ed.corner_opacity > 0:
            r = ed.width * 1.5
            lines.append('<circle class="anim-corner" cx="%s" cy="%s" r="%s" fill="%s" opacity="%s"/>' % (
                _f(ed.corner[0]), _f(ed.corner[1]), _f(r), ed.color, _f(ed.corner_opacity)))
    for nd in keyframe.nodes:
        if nd.opacity <= 0:
            continue
        lines.append('<circle class="anim-node" cx="%s" cy="%s" r="%s" fill="%s" stroke="#333333" stroke-width="%s" opacity="%s"/>' % (
            _f(nd.x), _f(nd.y), _f(nd.radius), nd.fill, _f(nd.radius * 0.12), _f(nd.opacity)))
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
