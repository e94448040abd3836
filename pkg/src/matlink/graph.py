"""Underlying graph storage, ingestion and structural metrics.

The underlying graph is immutable after load: nodes are dense integer
indices assigned in first-appearance order, edges keep their input order
and carry dense integer ids.  Parallel edges are kept (multiplicity
encodes e.g. repeated collaborations); undirected edges are canonicalized
with source <= target.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass, field

NOMINAL = "nominal"
CATEGORICAL = "categorical"
NUMERIC = "numeric"

_ATTR_KINDS = (NOMINAL, CATEGORICAL, NUMERIC)


class GraphFormatError(ValueError):
    """Malformed input stream (bad row, dangling endpoint, schema clash)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class MetricError(ValueError):
    """A structural metric is undefined for the given input."""


@dataclass
class AttributeColumn:
    """One typed attribute column: every value shares the declared kind."""

    kind: str
    values: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in _ATTR_KINDS:
            raise GraphFormatError("unknown attribute kind %r" % self.kind)


@dataclass
class GraphDocument:
    """The raw underlying graph: nodes, edges and typed attribute tables.

    ``labels[i]`` is the external id/label of node ``i``.  ``edges`` is a
    list of ``(edge_id, source, target)`` with ``edge_id == position``.
    """

    labels: list[str] = field(default_factory=list)
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    directed: bool = False
    node_attrs: dict[str, AttributeColumn] = field(default_factory=dict)
    edge_attrs: dict[str, AttributeColumn] = field(default_factory=dict)

    # -- structure ---------------------------------------------------------

    @property
    def node_count(self):
        return len(self.labels)

    @property
    def edge_count(self):
        return len(self.edges)

    def nodes(self):
        return range(len(self.labels))

    def has_node(self, n):
        return 0 <= n < len(self.labels)

    def incident_edges(self, n):
        """Edge ids touching node ``n`` (both endpoints for self-loops once)."""
        if not self.has_node(n):
            raise KeyError("unknown node id %r" % (n,))
        return [eid for eid, s, t in self.edges if s == n or t == n]

    def degree(self, n):
        if not self.has_node(n):
            raise KeyError("unknown node id %r" % (n,))
        d = 0
        for _, s, t in self.edges:
            if s == n:
                d += 1
            if t == n and s != n:
                d += 1
        return d

    def adjacency(self):
        """Simple adjacency sets (parallel edges collapsed, no self-loops)."""
        adj = [set() for _ in self.labels]
        for _, s, t in self.edges:
            if s != t:
                adj[s].add(t)
                adj[t].add(s)
        return adj

    def label_index(self):
        return {lab: i for i, lab in enumerate(self.labels)}


# -- ingestion -------------------------------------------------------------


def _decode(source):
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data


def _infer_kind(raw_values):
    for v in raw_values:
        if v is None or v == "":
            continue
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            continue
        try:
            float(v)
        except (TypeError, ValueError):
            return NOMINAL
    return NUMERIC


def _coerce_column(name, raw_values, kind=None):
    kind = kind or _infer_kind(raw_values)
    if kind == NUMERIC:
        vals = [None if v in (None, "") else float(v) for v in raw_values]
    else:
        vals = [None if v is None else str(v) for v in raw_values]
    return AttributeColumn(kind, vals)


def load_graph(source, format="edge-list-csv", directed=False):
    """Parse a byte/text stream into a :class:`GraphDocument`.

    ``format`` is ``edge-list-csv`` or ``graph-json``.  Node order is
    first-appearance order in the stream.
    """
    text = _decode(source)
    if format == "edge-list-csv":
        return _load_edge_list_csv(text, directed=directed)
    if format == "graph-json":
        return _load_graph_json(text)
    raise GraphFormatError("unknown format %r" % format)


def _canonical_edge(s, t, directed, line=None):
    if s == t and not directed:
        raise GraphFormatError("self-loop %r not allowed in undirected graph" % s, line)
    if not directed and s > t:
        s, t = t, s
    return s, t


def _load_edge_list_csv(text, directed=False):
    doc = GraphDocument(directed=directed)
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        return doc

    header = None
    first = [c.strip().lower() for c in rows[0][:2]]
    if first == ["source", "target"]:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]

    attr_names = []
    if rows:
        ncols = len(rows[0])
        if header:
            attr_names = header[2:]
        elif ncols > 2:
            attr_names = ["attr%d" % i for i in range(1, ncols - 1)]

    index = {}
    raw_attr_rows = []
    for lineno, row in enumerate(rows, start=2 if header else 1):
        if len(row) < 2:
            raise GraphFormatError("expected at least source,target", lineno)
        src_lab, tgt_lab = row[0].strip(), row[1].strip()
        if not src_lab or not tgt_lab:
            raise GraphFormatError("empty endpoint label", lineno)
        for lab in (src_lab, tgt_lab):
            if lab not in index:
                index[lab] = len(doc.labels)
                doc.labels.append(lab)
        s, t = _canonical_edge(index[src_lab], index[tgt_lab], directed, lineno)
        doc.edges.append((len(doc.edges), s, t))
        raw_attr_rows.append([c.strip() for c in row[2 : 2 + len(attr_names)]])

    for col, name in enumerate(attr_names):
        raw = [r[col] if col < len(r) else "" for r in raw_attr_rows]
        doc.edge_attrs[name] = _coerce_column(name, raw)
    doc.node_attrs["label"] = AttributeColumn(NOMINAL, list(doc.labels))
    return doc


def _load_graph_json(text):
    try:
        obj = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise GraphFormatError("invalid JSON: %s" % exc) from exc
    if not obj:
        return GraphDocument()

    directed = bool(obj.get("directed", False))
    doc = GraphDocument(directed=directed)
    node_objs = obj.get("nodes", [])
    edge_objs = obj.get("edges", [])

    index = {}
    node_attr_raw = {}
    for pos, nd in enumerate(node_objs):
        if "id" not in nd:
            raise GraphFormatError("node %d missing 'id'" % pos)
        nid = str(nd["id"])
        if nid in index:
            raise GraphFormatError("duplicate node id %r" % nid)
        index[nid] = len(doc.labels)
        doc.labels.append(nid)
        for k, v in nd.items():
            if k != "id":
                node_attr_raw.setdefault(k, {})[index[nid]] = v

    edge_attr_raw = {}
    for pos, ed in enumerate(edge_objs):
        for key in ("source", "target"):
            if key not in ed:
                raise GraphFormatError("edge %d missing %r" % (pos, key))
        src, tgt = str(ed["source"]), str(ed["target"])
        for lab in (src, tgt):
            if lab not in index:
                raise GraphFormatError("edge %d references unknown node %r" % (pos, lab))
        s, t = _canonical_edge(index[src], index[tgt], directed)
        doc.edges.append((len(doc.edges), s, t))
        for k, v in ed.items():
            if k not in ("source", "target"):
                edge_attr_raw.setdefault(k, {})[pos] = v

    for name, sparse in node_attr_raw.items():
        raw = [sparse.get(i) for i in range(len(doc.labels))]
        doc.node_attrs[name] = _coerce_column(name, raw)
    for name, sparse in edge_attr_raw.items():
        raw = [sparse.get(i) for i in range(len(doc.edges))]
        doc.edge_attrs[name] = _coerce_column(name, raw)
    if "label" not in doc.node_attrs:
        doc.node_attrs["label"] = AttributeColumn(NOMINAL, list(doc.labels))
    return doc


def serialize_graph_json(doc):
    """Stable-key JSON serialization; load(serialize(d)) preserves ids."""
    nodes = []
    for i in doc.nodes():
        nd = {"id": doc.labels[i]}
        for name, col in sorted(doc.node_attrs.items()):
            if name == "label" and col.values[i] == doc.labels[i]:
                continue
            if col.values[i] is not None:
                nd[name] = col.values[i]
        nodes.append(nd)
    edges = []
    for eid, s, t in doc.edges:
        ed = {"source": doc.labels[s], "target": doc.labels[t]}
        for name, col in sorted(doc.edge_attrs.items()):
            if col.values[eid] is not None:
                ed[name] = col.values[eid]
        edges.append(ed)
    obj = {"directed": doc.directed, "edges": edges, "nodes": nodes}
    return json.dumps(obj, sort_keys=True, indent=1).encode("utf-8")


# -- metrics ---------------------------------------------------------------


def connected_components(doc):
    """Partition nodes into components, each sorted, ordered by first node."""
    adj = doc.adjacency()
    seen = [False] * doc.node_count
    components = []
    for start in doc.nodes():
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            n = stack.pop()
            comp.append(n)
            for m in adj[n]:
                if not seen[m]:
                    seen[m] = True
                    stack.append(m)
        components.append(sorted(comp))
    return components


def clustering_coefficient(doc):
    """Mean local clustering coefficient over all nodes.

    Convention: nodes of degree < 2 contribute 0 and are included in the
    mean.  Parallel edges are collapsed for this metric.
    """
    if doc.node_count == 0:
        raise MetricError("clustering coefficient undefined for empty graph")
    adj = doc.adjacency()
    total = 0.0
    for n in doc.nodes():
        neigh = adj[n]
        k = len(neigh)
        if k < 2:
            continue
        links = 0
        neigh_list = sorted(neigh)
        for i, a in enumerate(neigh_list):
            for b in neigh_list[i + 1 :]:
                if b in adj[a]:
                    links += 1
        total += 2.0 * links / (k * (k - 1))
    return total / doc.node_count


def density(doc, node_subset):
    """Internal edge density of ``node_subset`` (simple undirected edges)."""
    subset = set(node_subset)
    if not subset:
        raise MetricError("density undefined for empty subset")
    n = len(subset)
    if n == 1:
        return 0.0
    inside = set()
    for _, s, t in doc.edges:
        if s != t and s in subset and t in subset:
            inside.add((min(s, t), max(s, t)))
    return len(inside) / (n * (n - 1) / 2)


def subgraph_edge_count(doc, node_subset):
    """Number of underlying edges (with multiplicity) inside the subset."""
    subset = set(node_subset)
    return sum(1 for _, s, t in doc.edges if s in subset and t in subset)


# -- synthetic data --------------------------------------------------------


def small_world_graph(n, k, p, seed=0):
    """Watts-Strogatz style ring-rewiring generator.

    Produces an undirected simple graph with ``n`` nodes, each joined to its
    ``k`` nearest ring neighbors, with each edge rewired with probability
    ``p``.  Deterministic for a fixed seed.
    """
    if k % 2 or k >= n:
        raise ValueError("k must be even and < n")
    rng = random.Random(seed)
    present = set()
    for i in range(n):
        for j in range(1, k // 2 + 1):
            a, b = i, (i + j) % n
            present.add((min(a, b), max(a, b)))
    edges = sorted(present)
    rewired = []
    present = set(edges)
    for a, b in edges:
        if rng.random() < p:
            present.discard((a, b))
            for _ in range(20):
                c = rng.randrange(n)
                cand = (min(a, c), max(a, c))
                if c != a and cand not in present:
                    present.add(cand)
                    rewired.append(cand)
                    break
            else:
                present.add((a, b))
                rewired.append((a, b))
        else:
            rewired.append((a, b))
    doc = GraphDocument()
    doc.labels = ["n%d" % i for i in range(n)]
    for s, t in rewired:
        doc.edges.append((len(doc.edges), s, t))
    doc.node_attrs["label"] = AttributeColumn(NOMINAL, list(doc.labels))
    return doc
