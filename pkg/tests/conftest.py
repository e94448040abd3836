import random

import pytest

from matlink import graph as graph_mod
from matlink import grouping as grouping_mod


def make_doc(pairs, directed=False, labels=None):
    """Build a document from label pairs, first-appearance node order."""
    csv = "\n".join("%s,%s" % (a, b) for a, b in pairs)
    return graph_mod.load_graph(csv, "edge-list-csv", directed=directed)


def random_doc(rng, n_nodes, edge_prob=0.3, allow_parallel=False):
    doc = graph_mod.GraphDocument()
    doc.labels = ["n%d" % i for i in range(n_nodes)]
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            if rng.random() < edge_prob:
                doc.edges.append((len(doc.edges), i, j))
                if allow_parallel and rng.random() < 0.2:
                    doc.edges.append((len(doc.edges), i, j))
    doc.node_attrs["label"] = graph_mod.AttributeColumn("nominal", list(doc.labels))
    return doc


# -- brute-force oracles ---------------------------------------------------


def brute_clustering(doc):
    """Independent oracle: enumerate all node triples."""
    adj = doc.adjacency()
    n = doc.node_count
    total = 0.0
    for v in range(n):
        k = len(adj[v])
        if k < 2:
            continue
        closed = 0
        triples = 0
        for a in range(n):
            for b in range(a + 1, n):
                if a in adj[v] and b in adj[v]:
                    triples += 1
                    if b in adj[a]:
                        closed += 1
        total += closed / triples
    return total / n


def brute_density(doc, subset):
    subset = sorted(set(subset))
    n = len(subset)
    if n < 2:
        return 0.0
    adj = doc.adjacency()
    count = 0
    for i, a in enumerate(subset):
        for b in subset[i + 1 :]:
            if b in adj[a]:
                count += 1
    return count / (n * (n - 1) / 2)


def brute_degree(doc, node):
    """Brute-force incidence scan."""
    return sum(1 for _, s, t in doc.edges for x in (s, t) if x == node)


def brute_aggregated_edges(doc, state):
    """Re-derive the aggregated edge sets from membership alone."""
    out = {}
    for eid, s, t in doc.edges:
        gs, gt = state.membership[s], state.membership[t]
        if gs != gt:
            out.setdefault((min(gs, gt), max(gs, gt)), []).append(eid)
    return {k: sorted(v) for k, v in out.items()}


def brute_internal_edges(doc, state, g):
    members = set(state.groups[g])
    return sorted(
        eid for eid, s, t in doc.edges if s in members and t in members
    )


@pytest.fixture
def rng():
    return random.Random(12345)
