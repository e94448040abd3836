"""Classification of a group's internal structure into collaboration
patterns: a dominant hub with otherwise sparse members (cross), a
near-clique (block), a hub plus dense sub-blocks (mixed), or
unclassified.

Thresholds are calibration knobs exposed in the config; the default
values make stars classify as cross, cliques as block, and a hub over
disjoint sub-cliques as mixed.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import graph as graph_mod


@dataclass(frozen=True)
class PatternThresholds:
    hub: float = 0.9  # min hub degree ratio for cross/mixed
    sparse: float = 0.15  # max residual density for cross
    dense: float = 0.6  # min density for block


@dataclass
class PatternReport:
    group: int
    pattern: str  # "cross", "block", "mixed" or "unclassified"
    dominant_member: object  # NodeId or None
    internal_density: float
    dominance_ratio: float
    reason: str = ""

    def to_dict(self):
        return {
            "group": self.group,
            "pattern": self.pattern,
            "dominant_member": self.dominant_member,
            "internal_density": self.internal_density,
            "dominance_ratio": self.dominance_ratio,
            "reason": self.reason,
        }


def classify(doc, grouping, g, thresholds=None):
    """Classify group ``g``; rules apply in order cross, block, mixed.

    Depends only on the internal subgraph, not on member ordering.
    """
    th = thresholds or PatternThresholds()
    members = grouping.members(g)
    k = len(members)
    if k < 3:
        return PatternReport(g, "unclassified", None, 0.0, 0.0,
                             reason="group smaller than 3 members")

    member_set = set(members)
    adj = {n: set() for n in members}
    for eid in grouping.internal_edges(g):
        _, s, t = doc.edges[eid]
        if s != t:
            adj[s].add(t)
            adj[t].add(s)

    d = graph_mod.density(doc, member_set)
    # dominance: highest internal degree ratio, ties broken by node id
    dominant = min(members, key=lambda n: (-len(adj[n]), n))
    r = len(adj[dominant]) / (k - 1)
    rest = member_set - {dominant}
    d_rest = graph_mod.density(doc, rest) if len(rest) >= 2 else 0.0

    if r >= th.hub and d_rest <= th.sparse:
        return PatternReport(g, "cross", dominant, d, r)
    if d >= th.dense:
        return PatternReport(g, "block", dominant if r >= th.hub else None, d, r)
    if r >= th.hub and d_rest > th.sparse:
        return PatternReport(g, "mixed", dominant, d, r)
    return PatternReport(g, "unclassified", None, d, r,
                         reason="no rule matched at current thresholds")


def classify_all(doc, grouping, thresholds=None, min_size=3):
    """Reports for every group of at least ``min_size`` members."""
    return [
        classify(doc, grouping, g, thresholds)
        for g in grouping.group_ids()
        if grouping.size(g) >= min_size
    ]
