"""Aggregated-graph state: a many-to-one partition of underlying nodes
into ordered groups, with the editing operations exposed as pure
transitions returning new states.

Singleton groups are first-class: every underlying node always belongs to
exactly one group, and a size-1 group simply renders as a plain node.
Aggregated/internal edge buckets are maintained incrementally; tests
cross-check them against a brute-force re-derivation.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field, replace


class GroupingError(ValueError):
    pass


@dataclass(frozen=True)
class GroupingState:
    """Partition of underlying nodes into ordered groups.

    ``groups`` maps GroupId -> ordered member list; ``membership`` is its
    exact inverse.  ``edge_bucket`` maps every underlying EdgeId either to
    a GroupId (internal edge) or a sorted (GroupId, GroupId) pair.
    """

    groups: dict[int, tuple[int, ...]]
    membership: dict[int, int]
    edge_bucket: dict[int, object]
    next_id: int
    labels: dict[int, str] = field(default_factory=dict)

    def group_of(self, n):
        return self.membership[n]

    def members(self, g):
        if g not in self.groups:
            raise GroupingError("unknown group %r" % (g,))
        return list(self.groups[g])

    def size(self, g):
        return len(self.groups[g])

    def group_ids(self):
        return sorted(self.groups)

    def internal_edges(self, g):
        """Underlying EdgeIds whose endpoints both lie in group g."""
        return sorted(e for e, b in self.edge_bucket.items() if b == g)

    def aggregated_edges(self):
        """Map (gid, gid) sorted pair -> sorted underlying EdgeId list."""
        out = {}
        for e, b in self.edge_bucket.items():
            if isinstance(b, tuple):
                out.setdefault(b, []).append(e)
        return {pair: sorted(eids) for pair, eids in out.items()}

    def to_dict(self, doc):
        groups = []
        for g in self.group_ids():
            entry = {"id": g, "members": [doc.labels[n] for n in self.groups[g]]}
            if g in self.labels:
                entry["label"] = self.labels[g]
            groups.append(entry)
        return {"groups": groups}


def initial_state(doc):
    """All-singleton partition; group id i holds underlying node i."""
    groups = {i: (i,) for i in doc.nodes()}
    membership = {i: i for i in doc.nodes()}
    state = GroupingState(groups, membership, {}, doc.node_count)
    return _rebucket(doc, state, set(doc.nodes()))


def state_from_dict(doc, obj):
    """Load a grouping file; unlisted nodes become implicit singletons."""
    index = doc.label_index()
    groups = {}
    membership = {}
    labels = {}
    next_id = doc.node_count
    for entry in obj.get("groups", []):
        members = []
        for lab in entry["members"]:
            if lab not in index:
                raise GroupingError("grouping references unknown node %r" % lab)
            n = index[lab]
            if n in membership:
                raise GroupingError("node %r listed in two groups" % lab)
            members.append(n)
        if not members:
            raise GroupingError("empty group in grouping file")
        gid = int(entry.get("id", next_id))
        if gid in groups:
            raise GroupingError("duplicate group id %r" % gid)
        groups[gid] = tuple(members)
        for n in members:
            membership[n] = gid
        if "label" in entry:
            labels[gid] = entry["label"]
        next_id = max(next_id, gid + 1)
    for n in doc.nodes():
        if n not in membership:
            while next_id in groups:
                next_id += 1
            groups[next_id] = (n,)
            membership[n] = next_id
            next_id += 1
    state = GroupingState(groups, membership, {}, next_id, labels)
    return _rebucket(doc, state, set(doc.nodes()))


def _rebucket(doc, state, affected_nodes):
    """Re-derive edge buckets for edges touching the affected nodes."""
    bucket = dict(state.edge_bucket)
    for eid, s, t in doc.edges:
        if s in affected_nodes or t in affected_nodes:
            gs, gt = state.membership[s], state.membership[t]
            bucket[eid] = gs if gs == gt else (min(gs, gt), max(gs, gt))
    return replace(state, edge_bucket=bucket)


def _drop_groups(state, gids):
    groups = {g: m for g, m in state.groups.items() if g not in gids}
    labels = {g: l for g, l in state.labels.items() if g not in gids}
    return replace(state, groups=groups, labels=labels)


# -- operations ------------------------------------------------------------


def aggregate(doc, state, selection):
    """Collapse the selected groups into one new group.

    Member order follows the selection order (each selected group keeps
    its internal order).  Returns (new state, new GroupId).
    """
    selection = list(selection)
    if not selection:
        raise GroupingError("empty selection")
    seen = set()
    members = []
    for g in selection:
        if g not in state.groups:
            raise GroupingError("unknown group %r" % (g,))
        if g in seen:
            raise GroupingError("group %r selected twice" % (g,))
        seen.add(g)
        members.extend(state.groups[g])
    gid = state.next_id
    state = _drop_groups(state, seen)
    groups = dict(state.groups)
    groups[gid] = tuple(members)
    membership = dict(state.membership)
    for n in members:
        membership[n] = gid
    state = replace(state, groups=groups, membership=membership, next_id=gid + 1)
    return _rebucket(doc, state, set(members)), gid


def split(doc, state, g):
    """Replace group g with one singleton per member.

    Returns (new state, list of new singleton GroupIds in member order).
    A size-1 group is a no-op (the group id is kept).
    """
    members = state.members(g)
    if len(members) < 2:
        return state, [g]
    state = _drop_groups(state, {g})
    groups = dict(state.groups)
    membership = dict(state.membership)
    new_ids = []
    nid = state.next_id
    for n in members:
        groups[nid] = (n,)
        membership[n] = nid
        new_ids.append(nid)
        nid += 1
    state = replace(state, groups=groups, membership=membership, next_id=nid)
    return _rebucket(doc, state, set(members)), new_ids


def add_node_to_group(doc, state, n_group, g):
    """Drop a single (singleton) node into an existing group, appended last."""
    if n_group not in state.groups:
        raise GroupingError("unknown group %r" % (n_group,))
    if g not in state.groups:
        raise GroupingError("unknown group %r" % (g,))
    if n_group == g:
        raise GroupingError("cannot add a group to itself")
    if len(state.groups[n_group]) != 1:
        raise GroupingError("source is not a singleton; use merge_groups")
    (node,) = state.groups[n_group]
    state = _drop_groups(state, {n_group})
    groups = dict(state.groups)
    groups[g] = state.groups[g] + (node,)
    membership = dict(state.membership)
    membership[node] = g
    state = replace(state, groups=groups, membership=membership)
    return _rebucket(doc, state, {node})


def extract_node(doc, state, g, n):
    """Pull one member out of its group into a fresh singleton.

    Remaining ordinals stay contiguous in the original order.
    Returns (new state, the new singleton's GroupId).
    """
    members = state.members(g)
    if n not in members:
        raise GroupingError("node %r not in group %r" % (n, g))
    gid = state.next_id
    groups = dict(state.groups)
    remaining = tuple(m for m in members if m != n)
    if remaining:
        groups[g] = remaining
    else:
        del groups[g]
    groups[gid] = (n,)
    membership = dict(state.membership)
    membership[n] = gid
    state = replace(state, groups=groups, membership=membership, next_id=gid + 1)
    return _rebucket(doc, state, {n}), gid


def move_item(doc, state, src, n, dst):
    """Move one member from src to dst, appended last (one transition)."""
    if src == dst:
        raise GroupingError("source and destination are the same group")
    if dst not in state.groups:
        raise GroupingError("unknown group %r" % (dst,))
    members = state.members(src)
    if n not in members:
        raise GroupingError("node %r not in group %r" % (n, src))
    groups = dict(state.groups)
    remaining = tuple(m for m in members if m != n)
    if remaining:
        groups[src] = remaining
    else:
        del groups[src]
    groups[dst] = state.groups[dst] + (n,)
    membership = dict(state.membership)
    membership[n] = dst
    labels = {g: l for g, l in state.labels.items() if g in groups}
    state = replace(state, groups=groups, membership=membership, labels=labels)
    return _rebucket(doc, state, {n})


def merge_groups(doc, state, a, b):
    """Merge two groups; member order follows underlying node indices.

    Returns (new state, merged GroupId).
    """
    if a == b:
        raise GroupingError("cannot merge a group with itself")
    members_a = state.members(a)
    members_b = state.members(b)
    merged = tuple(sorted(members_a + members_b))
    gid = state.next_id
    state = _drop_groups(state, {a, b})
    groups = dict(state.groups)
    groups[gid] = merged
    membership = dict(state.membership)
    for n in merged:
        membership[n] = gid
    state = replace(state, groups=groups, membership=membership, next_id=gid + 1)
    return _rebucket(doc, state, set(merged)), gid


def reorder_member(doc, state, g, n, new_ordinal):
    """Permute one member to a new ordinal; membership is unchanged."""
    members = state.members(g)
    if n not in members:
        raise GroupingError("node %r not in group %r" % (n, g))
    if not 0 <= new_ordinal < len(members):
        raise GroupingError("ordinal %d out of range" % new_ordinal)
    members.remove(n)
    members.insert(new_ordinal, n)
    groups = dict(state.groups)
    groups[g] = tuple(members)
    return replace(state, groups=groups)


def set_group_label(state, g, label):
    if g not in state.groups:
        raise GroupingError("unknown group %r" % (g,))
    labels = dict(state.labels)
    labels[g] = label
    return replace(state, labels=labels)


# -- attribute propagation -------------------------------------------------


def aggregate_attributes(doc, state, g):
    """Combine member attributes per column kind.

    Nominal/categorical columns concatenate member values with "+" in
    member order; numeric columns report mean/min/max (missing values
    skipped).
    """
    members = state.members(g)
    out = {}
    for name, col in doc.node_attrs.items():
        if col.kind == "numeric":
            vals = [col.values[n] for n in members if col.values[n] is not None]
            if vals:
                out[name] = {
                    "mean": statistics.fmean(vals),
                    "min": min(vals),
                    "max": max(vals),
                }
            else:
                out[name] = {"mean": None, "min": None, "max": None}
        else:
            out[name] = "+".join(
                str(col.values[n]) for n in members if col.values[n] is not None
            )
    return out


def group_label(doc, state, g, max_len=24):
    """User label if set, else concatenated member labels, truncated."""
    if g in state.labels:
        return state.labels[g]
    members = state.groups[g]
    labs = [doc.labels[n] for n in members]
    joined = "+".join(labs)
    if len(joined) <= max_len or len(labs) == 1:
        return joined
    return labs[0] + " et al."


# -- oracles / invariant helpers ------------------------------------------


def derive_buckets(doc, state):
    """Brute-force re-derivation of edge buckets from membership alone."""
    bucket = {}
    for eid, s, t in doc.edges:
        gs, gt = state.membership[s], state.membership[t]
        bucket[eid] = gs if gs == gt else (min(gs, gt), max(gs, gt))
    return bucket


def check_invariants(doc, state):
    """Raise AssertionError if the partition/edge invariants are violated."""
    seen = set()
    for g, members in state.groups.items():
        assert members, "empty group %r" % g
        assert len(set(members)) == len(members), "duplicate member in %r" % g
        for n in members:
            assert n not in seen, "node %r in two groups" % n
            assert state.membership[n] == g, "membership inverse broken at %r" % n
            seen.add(n)
    assert seen == set(doc.nodes()), "partition not total"
    assert state.edge_bucket == derive_buckets(doc, state), "edge buckets stale"
    internal = sum(len(state.internal_edges(g)) for g in state.groups)
    aggregated = sum(len(v) for v in state.aggregated_edges().values())
    assert internal + aggregated == doc.edge_count, "edge conservation broken"
