"""Headless editing session: one serialized command stream over a shared
(document, grouping, layout, style) state, with a replayable command log
and linear undo.

The wire protocol is newline-delimited JSON: one ``{"cmd", "id", "args"}``
object per line in, one ``{"reply-to", "event", "payload"}`` object per
line out.  A malformed command produces an error event and the loop
continues.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import animation as animation_mod
from . import grouping as grouping_mod
from . import layout as layout_mod
from . import patterns as patterns_mod
from . import render as render_mod
from . import scene as scene_mod


class SessionError(ValueError):
    pass


@dataclass
class Snapshot:
    grouping: grouping_mod.GroupingState
    layout: layout_mod.LayoutState
    style: scene_mod.StyleConfig


class Session:
    """Authoritative state plus the command log that reproduces it."""

    def __init__(self, doc, grouping=None, layout=None, style=None, seed=0):
        self.doc = doc
        self.seed = seed
        self.style = style or scene_mod.StyleConfig()
        self.grouping = grouping or grouping_mod.initial_state(doc)
        if layout is None:
            layout = layout_mod.initial_layout(
                self.grouping.group_ids(),
                layout_mod.weighted_edges_from_grouping(self.grouping),
                seed=seed,
            )
        self.layout = self._with_extents(layout)
        self.log = []
        self._undo_stack = []

    # -- state bookkeeping -------------------------------------------------

    def _with_extents(self, layout):
        half = {
            g: scene_mod.glyph_half_diagonal(self.grouping.size(g), self.style)
            for g in self.grouping.group_ids()
        }
        return layout_mod.LayoutState(layout.positions, layout.pinned, half)

    def state_hash(self):
        blob = json.dumps(
            {
                "grouping": self.grouping.to_dict(self.doc),
                "layout": self.layout.to_dict(),
                "style": self.style.to_dict(),
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def _push_undo(self):
        self._undo_stack.append(Snapshot(self.grouping, self.layout, self.style))

    def _restore(self, snap):
        self.grouping = snap.grouping
        self.layout = snap.layout
        self.style = snap.style

    def _resolve_nodes(self, labels):
        index = self.doc.label_index()
        out = []
        for lab in labels:
            if isinstance(lab, int) and self.doc.has_node(lab):
                out.append(lab)
            elif str(lab) in index:
                out.append(index[str(lab)])
            else:
                raise SessionError("unknown node %r" % (lab,))
        return out

    def _weighted_edges(self):
        return layout_mod.weighted_edges_from_grouping(self.grouping)

    def _local_relax(self, free):
        self.layout = layout_mod.incremental_relax(
            self.layout, self._weighted_edges(), free, seed=self.seed
        )

    # -- editing operations (state transitions + layout updates) ----------

    def aggregate(self, selection):
        before = {g: self.layout.positions[g] for g in selection}
        self.grouping, gid = grouping_mod.aggregate(self.doc, self.grouping, selection)
        self.layout = layout_mod.place_aggregate(self.layout, gid, list(before))
        self.layout = self._with_extents(self.layout)
        self._local_relax({gid})
        return gid

    def aggregate_nodes(self, nodes):
        """Aggregate by underlying node: each node's current group is taken
        whole, in first-mention order."""
        selection = []
        for n in nodes:
            g = self.grouping.group_of(n)
            if g not in selection:
                selection.append(g)
        return self.aggregate(selection)

    def split(self, g):
        self.grouping, new_ids = grouping_mod.split(self.doc, self.grouping, g)
        if len(new_ids) > 1 or new_ids[0] != g:
            self.layout = layout_mod.place_split(self.layout, g, new_ids)
            self.layout = self._with_extents(self.layout)
            self._local_relax(set(new_ids))
        return new_ids

    def add_node_to_group(self, n_group, g):
        self.grouping = grouping_mod.add_node_to_group(self.doc, self.grouping, n_group, g)
        self.layout = layout_mod.place_transfer(self.layout, [n_group], {})
        self.layout = self._with_extents(self.layout)
        self._local_relax({g})

    def extract_node(self, g, n):
        gx, gy = self.layout.positions[g]
        offset = self.layout.half_diagonal.get(g, 1.0) * 1.5
        self.grouping, nid = grouping_mod.extract_node(self.doc, self.grouping, g, n)
        removed = [] if g in self.grouping.groups else [g]
        self.layout = layout_mod.place_transfer(
            self.layout, removed, {nid: (gx + offset, gy)})
        self.layout = self._with_extents(self.layout)
        self._local_relax({nid})
        return nid

    def move_item(self, src, n, dst):
        self.grouping = grouping_mod.move_item(self.doc, self.grouping, src, n, dst)
        removed = [] if src in self.grouping.groups else [src]
        self.layout = layout_mod.place_transfer(self.layout, removed, {})
        self.layout = self._with_extents(self.layout)
        self._local_relax({dst})

    def merge_groups(self, a, b):
        pa, pb = self.layout.positions[a], self.layout.positions[b]
        self.grouping, gid = grouping_mod.merge_groups(self.doc, self.grouping, a, b)
        mid = ((pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0)
        self.layout = layout_mod.place_transfer(self.layout, [a, b], {gid: mid})
        self.layout = self._with_extents(self.layout)
        self._local_relax({gid})
        return gid

    def reorder_member(self, g, n, ordinal):
        self.grouping = grouping_mod.reorder_member(self.doc, self.grouping, g, n, ordinal)

    def move_group(self, g, x, y):
        self.layout = self.layout.with_position(g, (x, y), pin=True)

    def relax(self, iterations=None):
        params = layout_mod.LinLogParams()
        if iterations:
            params.max_iterations = int(iterations)
        self.layout = layout_mod.relax(
            self.layout, self._weighted_edges(), params, seed=self.seed).state
        self.layout = self._with_extents(self.layout)

    def build_scene(self):
        return scene_mod.build_scene(self.doc, self.grouping, self.layout, self.style)

    # -- command dispatch --------------------------------------------------

    def handle(self, message):
        """Apply one protocol command; returns the terminal event dict."""
        try:
            cmd = message.get("cmd")
            args = message.get("args", {}) or {}
            payload = self._dispatch(cmd, args)
            event = {"reply-to": message.get("id"), "event": payload.pop("_event"),
                     "payload": payload}
        except (SessionError, grouping_mod.GroupingError, layout_mod.LayoutError,
                scene_mod.SceneError, animation_mod.AnimationError,
                KeyError, TypeError, ValueError) as exc:
            event = {
                "reply-to": message.get("id"),
                "event": "error",
                "payload": {"message": str(exc) or exc.__class__.__name__},
            }
        return event

    def _dispatch(self, cmd, args):
        mutating = {
            "aggregate", "split", "add", "extract", "move", "merge",
            "reorder", "move-group", "set-style", "relax",
        }
        if cmd in mutating:
            self._push_undo()
            try:
                payload = self._apply(cmd, args)
            except Exception:
                self._restore(self._undo_stack.pop())
                raise
            self.log.append({"cmd": cmd, "args": args})
            payload["state-hash"] = self.state_hash()
            payload["_event"] = "state-delta"
            return payload

        if cmd == "undo":
            if not self._undo_stack:
                raise SessionError("nothing to undo")
            self._restore(self._undo_stack.pop())
            self.log.append({"cmd": "undo", "args": {}})
            return {"_event": "state-delta", "state-hash": self.state_hash()}
        if cmd == "request-scene":
            return {"_event": "scene", "scene": self.build_scene().to_dict()}
        if cmd == "plan-animation":
            return self._plan_animation(args)
        if cmd == "classify":
            th = patterns_mod.PatternThresholds(**args.get("thresholds", {}))
            reports = patterns_mod.classify_all(self.doc, self.grouping, th)
            return {"_event": "report", "reports": [r.to_dict() for r in reports]}
        if cmd == "save":
            return self._save(args)
        if cmd == "state-hash":
            return {"_event": "report", "state-hash": self.state_hash()}
        raise SessionError("unknown command %r" % (cmd,))

    def _apply(self, cmd, args):
        if cmd == "aggregate":
            if "nodes" in args:
                gid = self.aggregate_nodes(self._resolve_nodes(args["nodes"]))
            else:
                gid = self.aggregate([int(g) for g in args["groups"]])
            return {"group": gid}
        if cmd == "split":
            new_ids = self.split(int(args["group"]))
            return {"groups": new_ids}
        if cmd == "add":
            self.add_node_to_group(int(args["node-group"]), int(args["group"]))
            return {"group": int(args["group"])}
        if cmd == "extract":
            (n,) = self._resolve_nodes([args["node"]])
            nid = self.extract_node(int(args["group"]), n)
            return {"group": nid}
        if cmd == "move":
            (n,) = self._resolve_nodes([args["node"]])
            self.move_item(int(args["from"]), n, int(args["to"]))
            return {"group": int(args["to"])}
        if cmd == "merge":
            gid = self.merge_groups(int(args["a"]), int(args["b"]))
            return {"group": gid}
        if cmd == "reorder":
            (n,) = self._resolve_nodes([args["node"]])
            self.reorder_member(int(args["group"]), n, int(args["ordinal"]))
            return {"group": int(args["group"])}
        if cmd == "move-group":
            self.move_group(int(args["group"]), float(args["x"]), float(args["y"]))
            return {"group": int(args["group"])}
        if cmd == "set-style":
            merged = self.style.to_dict()
            merged.update(args.get("style", {}))
            self.style = scene_mod.style_from_dict(merged)
            self.layout = self._with_extents(self.layout)
            return {}
        if cmd == "relax":
            self.relax(args.get("iterations"))
            return {}
        raise SessionError("unknown command %r" % (cmd,))

    def _plan_animation(self, args):
        g = int(args["group"])
        spec = animation_mod.spec_from_dict(args.get("spec", {}))
        plan = animation_mod.plan_transition(
            self.doc, self.grouping, self.layout, g, spec, self.style)
        n = int(args.get("frames", 11))
        if n < 2:
            raise SessionError("need at least 2 frames")
        frames = []
        for k in range(n):
            kf = plan.sample(k / (n - 1))
            frames.append(_keyframe_dict(kf))
        return {"_event": "keyframes", "group": g, "spec": spec.to_dict(),
                "frames": frames}

    def _save(self, args):
        out = {
            "grouping": self.grouping.to_dict(self.doc),
            "layout": self.layout.to_dict(),
            "style": self.style.to_dict(),
            "log": self.log,
        }
        path = args.get("path")
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(out, fh, sort_keys=True, indent=1)
            return {"_event": "report", "saved": path}
        return {"_event": "report", "session": out}

    def replay(self, log):
        """Re-apply a command log; determinism gives an identical state."""
        for message in log:
            event = self.handle({"cmd": message["cmd"], "args": message.get("args", {}),
                                 "id": None})
            if event["event"] == "error":
                raise SessionError("replay failed on %r: %s" % (
                    message["cmd"], event["payload"]["message"]))


def _keyframe_dict(kf):
    out = {"t": kf.t, "matrix_opacity": kf.matrix_opacity}
    if kf.scene is not None:
        out["scene"] = kf.scene.to_dict()
    else:
        out["nodes"] = [
            {"node": n.node, "copy": n.copy, "x": n.x, "y": n.y,
             "radius": n.radius, "fill": n.fill, "opacity": n.opacity}
            for n in kf.nodes
        ]
        out["edges"] = [
            {"edge": e.eid, "copy": e.copy, "points": [list(p) for p in e.points],
             "corner": list(e.corner) if e.corner else None,
             "corner_opacity": e.corner_opacity, "opacity": e.opacity,
             "width": e.width, "color": e.color, "curved": e.curved}
            for e in kf.edges
        ]
        if kf.matrix is not None:
            out["matrix_group"] = kf.matrix.group
    return out


def run_session(instream, outstream, session):
    """Newline-delimited JSON command loop; malformed input never kills it."""
    for line in instream:
        line = line.strip()
        if not line:
            continue
        try:
            message = json.loads(line)
            if not isinstance(message, dict):
                raise ValueError("command must be a JSON object")
        except ValueError as exc:
            event = {"reply-to": None, "event": "error",
                     "payload": {"message": "malformed command: %s" % exc}}
        else:
            if message.get("cmd") == "quit":
                outstream.write(json.dumps(
                    {"reply-to": message.get("id"), "event": "report",
                     "payload": {"bye": True}}, sort_keys=True) + "\n")
                outstream.flush()
                break
            event = session.handle(message)
        outstream.write(json.dumps(event, sort_keys=True) + "\n")
        outstream.flush()
