"""Command-line front door.

Subcommands: ``stats`` (structural metrics as delimited output plus
optional matplotlib figures), ``render`` (SVG of a grouped layout),
``animate`` (SVG frame export of a transition plan), ``suggest``
(modularity-based grouping bootstrap) and ``session`` (the interactive
protocol loop any front end speaks).

Exit codes: 0 success, 1 usage error, 2 input data error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import animation as animation_mod
from . import graph as graph_mod
from . import grouping as grouping_mod
from . import layout as layout_mod
from . import patterns as patterns_mod
from . import render as render_mod
from . import scene as scene_mod
from . import session as session_mod

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class DataError(Exception):
    pass


def _guess_format(path):
    return "graph-json" if path.endswith(".json") else "edge-list-csv"


def _load_doc(path, fmt=None, directed=False):
    try:
        with open(path, "rb") as fh:
            return graph_mod.load_graph(fh, fmt or _guess_format(path), directed=directed)
    except OSError as exc:
        raise DataError("cannot read %s: %s" % (path, exc)) from exc
    except graph_mod.GraphFormatError as exc:
        raise DataError("bad graph file %s: %s" % (path, exc)) from exc


def _load_grouping(doc, path):
    if path is None:
        return grouping_mod.initial_state(doc)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        return grouping_mod.state_from_dict(doc, obj)
    except OSError as exc:
        raise DataError("cannot read %s: %s" % (path, exc)) from exc
    except (ValueError, KeyError, grouping_mod.GroupingError) as exc:
        raise DataError("bad grouping file %s: %s" % (path, exc)) from exc


def _load_layout(path):
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return layout_mod.state_from_dict(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        raise DataError("bad layout file %s: %s" % (path, exc)) from exc


def _load_style(path):
    if path is None:
        return scene_mod.StyleConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return scene_mod.style_from_dict(json.load(fh))
    except (OSError, ValueError, TypeError, scene_mod.SceneError) as exc:
        raise DataError("bad style file %s: %s" % (path, exc)) from exc


# -- stats -----------------------------------------------------------------


def compute_stats(doc):
    components = graph_mod.connected_components(doc)
    largest = max(components, key=len) if components else []
    return {
        "nodes": doc.node_count,
        "edges": doc.edge_count,
        "components": len(components),
        "largest_component_nodes": len(largest),
        "largest_component_edges": graph_mod.subgraph_edge_count(doc, largest),
        "density": (graph_mod.density(doc, range(doc.node_count))
                    if doc.node_count > 1 else 0.0),
        "clustering_coefficient": (graph_mod.clustering_coefficient(doc)
                                   if doc.node_count else 0.0),
    }


def _write_stats_figures(doc, out_dir):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    degrees = [doc.degree(n) for n in doc.nodes()]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hist(degrees, bins=range(0, max(degrees, default=0) + 2), color="#4c78a8",
            edgecolor="white")
    ax.set_xlabel("degree")
    ax.set_ylabel("nodes")
    ax.set_title("Degree distribution")
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "degree_distribution.png"), dpi=150)
    plt.close(fig)

    sizes = sorted((len(c) for c in graph_mod.connected_components(doc)), reverse=True)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(range(1, len(sizes) + 1), sizes, color="#f58518")
    ax.set_xlabel("component rank")
    ax.set_ylabel("size")
    ax.set_title("Component sizes")
    fig.tight_layout()
    fig.savefig(os.path.join(out_dir, "component_sizes.png"), dpi=150)
    plt.close(fig)


def cmd_stats(args):
    doc = _load_doc(args.graph, args.format, directed=args.directed)
    stats = compute_stats(doc)
    lines = ["metric\tvalue"]
    for key in ("nodes", "edges", "components", "largest_component_nodes",
                "largest_component_edges", "density", "clustering_coefficient"):
        val = stats[key]
        lines.append("%s\t%s" % (key, ("%.6f" % val) if isinstance(val, float) else val))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.figures:
        _write_stats_figures(doc, args.figures)
    return EXIT_OK


# -- render ----------------------------------------------------------------


def cmd_render(args):
    doc = _load_doc(args.graph, args.format, directed=args.directed)
    grouping = _load_grouping(doc, args.groups)
    style = _load_style(args.style)
    layout = _load_layout(args.layout)
    if layout is None:
        layout = layout_mod.initial_layout(
            grouping.group_ids(),
            layout_mod.weighted_edges_from_grouping(grouping),
            seed=args.seed,
        )
    missing = [g for g in grouping.group_ids() if g not in layout.positions]
    if missing:
        raise DataError("layout file lacks positions for groups %s" % missing)
    half = {g: scene_mod.glyph_half_diagonal(grouping.size(g), style)
            for g in grouping.group_ids()}
    layout = layout_mod.LayoutState(layout.positions, layout.pinned, half)
    layout = layout_mod.remove_overlaps(layout)
    svg = render_mod.render_svg(
        scene_mod.build_scene(doc, grouping, layout, style),
        width=args.width, height=args.height)
    with open(args.out, "wb") as fh:
        fh.write(svg)
    return EXIT_OK


# -- animate ---------------------------------------------------------------


def cmd_animate(args):
    doc = _load_doc(args.graph, args.format, directed=args.directed)
    grouping = _load_grouping(doc, args.groups)
    style = _load_style(args.style)
    layout = _load_layout(args.layout)
    if layout is None:
        layout = layout_mod.initial_layout(
            grouping.group_ids(),
            layout_mod.weighted_edges_from_grouping(grouping),
            seed=args.seed,
        )
    spec_obj = {}
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec_obj = json.load(fh)
    if args.direction:
        spec_obj["direction"] = args.direction
    try:
        spec = animation_mod.spec_from_dict(spec_obj)
    except animation_mod.AnimationError as exc:
        raise DataError(str(exc)) from exc
    if args.frames < 2:
        raise DataError("need at least 2 frames")
    if args.group not in grouping.groups or grouping.size(args.group) < 2:
        raise DataError("group %r missing or smaller than 2 members" % args.group)

    plan = animation_mod.plan_transition(doc, grouping, layout, args.group, spec, style)
    os.makedirs(args.out, exist_ok=True)
    manifest = {"group": args.group, "spec": spec.to_dict(), "frames": []}
    for k in range(args.frames):
        t = k / (args.frames - 1)
        kf = plan.sample(t)
        name = "frame_%04d.svg" % k
        with open(os.path.join(args.out, name), "wb") as fh:
            fh.write(render_mod.render_keyframe_svg(kf, args.width, args.height))
        manifest["frames"].append({"index": k, "t": t, "file": name})
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
    return EXIT_OK


# -- suggest ---------------------------------------------------------------


def suggest_groups(doc, resolution=1.0, seed=0, min_size=2):
    """Greedy modularity grouping; components smaller than min_size stay
    implicit singletons."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(doc.nodes())
    for _, s, t in doc.edges:
        if s != t:
            if g.has_edge(s, t):
                g[s][t]["weight"] += 1.0
            else:
                g.add_edge(s, t, weight=1.0)
    groups = []
    if g.number_of_edges():
        communities = nx.algorithms.community.greedy_modularity_communities(
            g, weight="weight", resolution=resolution)
        for comm in communities:
            members = sorted(comm)
            if len(members) >= min_size:
                groups.append(members)
    groups.sort(key=lambda m: m[0])
    return {
        "groups": [
            {"id": doc.node_count + i, "members": [doc.labels[n] for n in members]}
            for i, members in enumerate(groups)
        ]
    }


def cmd_suggest(args):
    doc = _load_doc(args.graph, args.format, directed=args.directed)
    obj = suggest_groups(doc, resolution=args.resolution, seed=args.seed)
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- classify --------------------------------------------------------------


def cmd_classify(args):
    doc = _load_doc(args.graph, args.format, directed=args.directed)
    grouping = _load_grouping(doc, args.groups)
    reports = patterns_mod.classify_all(doc, grouping)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump([r.to_dict() for r in reports], fh, sort_keys=True, indent=1)
    header = "%-8s %-12s %-20s %8s %8s" % ("group", "pattern", "dominant", "density", "hub")
    lines = [header, "-" * len(header)]
    for r in reports:
        dom = doc.labels[r.dominant_member] if r.dominant_member is not None else "-"
        lines.append("%-8d %-12s %-20s %8.3f %8.3f" % (
            r.group, r.pattern, dom[:20], r.internal_density, r.dominance_ratio))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# -- session ---------------------------------------------------------------


def cmd_session(args):
    doc = _load_doc(args.graph, args.format, directed=args.directed)
    grouping = _load_grouping(doc, args.groups)
    layout = _load_layout(args.layout)
    style = _load_style(args.style)
    sess = session_mod.Session(doc, grouping, layout, style, seed=args.seed)
    if args.transport == "stdio":
        session_mod.run_session(sys.stdin, sys.stdout, sess)
        return EXIT_OK
    # local socket transport: one client at a time
    import socket

    server = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    server.bind(("127.0.0.1", args.port))
    server.listen(1)
    sys.stderr.write("listening on 127.0.0.1:%d\n" % server.getsockname()[1])
    conn, _ = server.accept()
    with conn:
        rfile = conn.makefile("r", encoding="utf-8")
        wfile = conn.makefile("w", encoding="utf-8")
        session_mod.run_session(rfile, wfile, sess)
    server.close()
    return EXIT_OK


# -- generate (bundled synthetic data) -------------------------------------


def cmd_generate(args):
    doc = graph_mod.small_world_graph(args.nodes, args.neighbors, args.rewire,
                                      seed=args.seed)
    data = graph_mod.serialize_graph_json(doc)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


def _add_common(p, need_graph=True):
    if need_graph:
        p.add_argument("--graph", required=True, help="graph file (CSV or JSON)")
        p.add_argument("--format", choices=["edge-list-csv", "graph-json"],
                       help="override format autodetection")
        p.add_argument("--directed", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="matlink")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="structural metrics report")
    _add_common(p)
    p.add_argument("--out", help="write delimited report here (default stdout)")
    p.add_argument("--figures", help="directory for matplotlib figures")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="render grouped graph to SVG")
    _add_common(p)
    p.add_argument("--groups", help="grouping JSON file")
    p.add_argument("--layout", help="layout JSON file")
    p.add_argument("--style", help="style JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=600)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("animate", help="export transition frames")
    _add_common(p)
    p.add_argument("--groups", required=True)
    p.add_argument("--layout")
    p.add_argument("--style")
    p.add_argument("--group", type=int, required=True)
    p.add_argument("--frames", type=int, default=11)
    p.add_argument("--spec", help="animation spec JSON file")
    p.add_argument("--direction", choices=["to-matrix", "to-node-link"])
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=600)
    p.set_defaults(func=cmd_animate)

    p = sub.add_parser("suggest", help="bootstrap a grouping file")
    _add_common(p)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("classify", help="collaboration-pattern report")
    _add_common(p)
    p.add_argument("--groups", required=True)
    p.add_argument("--json-out", dest="json_out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("session", help="run the command/event loop")
    _add_common(p)
    p.add_argument("--groups")
    p.add_argument("--layout")
    p.add_argument("--style")
    p.add_argument("--transport", choices=["stdio", "socket"], default="stdio")
    p.add_argument("--port", type=int, default=0)
    p.set_defaults(func=cmd_session)

    p = sub.add_parser("generate", help="synthetic small-world graph")
    _add_common(p, need_graph=False)
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--neighbors", type=int, default=4)
    p.add_argument("--rewire", type=float, default=0.1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except DataError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_DATA
    except AssertionError as exc:
        sys.stderr.write("internal invariant violation: %s\n" % exc)
        return EXIT_INTERNAL
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
