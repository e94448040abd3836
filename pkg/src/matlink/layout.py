"""Energy-based placement of aggregate nodes.

The energy model has linear attraction along aggregated edges (weighted
by underlying-edge multiplicity) and logarithmic repulsion between every
group pair, which pushes loosely-connected clusters apart and keeps
tightly-connected ones prominent.  Descent is plain gradient descent with
an adaptive step: halve on an energy increase, grow 1.1x on a decrease,
so accepted iterates are monotone in energy.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

import numpy as np


class LayoutError(ValueError):
    pass


@dataclass
class LinLogParams:
    attraction: float = 1.0
    repulsion: float = 1.0
    max_iterations: int = 500
    initial_step: float = 0.1
    step_growth: float = 1.1
    convergence: float = 1e-6
    jitter: float = 1e-4

    def __post_init__(self):
        if self.attraction <= 0 or self.repulsion <= 0:
            raise LayoutError("weights must be positive")
        if not 0 < self.convergence:
            raise LayoutError("convergence threshold must be positive")


@dataclass(frozen=True)
class LayoutState:
    """Positions and pin flags for all live groups, in layout units."""

    positions: dict[int, tuple[float, float]]
    pinned: frozenset[int] = frozenset()
    half_diagonal: dict[int, float] = field(default_factory=dict)

    def position(self, g):
        return self.positions[g]

    def with_position(self, g, xy, pin=False):
        positions = dict(self.positions)
        positions[g] = (float(xy[0]), float(xy[1]))
        pinned = self.pinned | {g} if pin else self.pinned
        return replace(self, positions=positions, pinned=pinned)

    def to_dict(self):
        return {
            "positions": {str(g): [x, y] for g, (x, y) in sorted(self.positions.items())},
            "pinned": sorted(self.pinned),
        }


def state_from_dict(obj):
    positions = {int(g): (float(x), float(y)) for g, (x, y) in obj.get("positions", {}).items()}
    pinned = frozenset(int(g) for g in obj.get("pinned", []))
    return LayoutState(positions, pinned)


@dataclass
class RelaxResult:
    state: LayoutState
    energies: list[float]
    iterations: int


def _as_arrays(state, weighted_edges):
    gids = sorted(state.positions)
    index = {g: i for i, g in enumerate(gids)}
    pos = np.array([state.positions[g] for g in gids], dtype=float)
    edges = np.array(
        [[index[u], index[v]] for u, v, _ in weighted_edges if u in index and v in index],
        dtype=int,
    ).reshape(-1, 2)
    weights = np.array(
        [w for u, v, w in weighted_edges if u in index and v in index], dtype=float
    )
    return gids, index, pos, edges, weights


def _pair_distances(pos):
    diff = pos[:, None, :] - pos[None, :, :]
    return diff, np.sqrt((diff**2).sum(axis=2))


def _jitter(pos, rng, magnitude):
    n = len(pos)
    for _ in range(50):
        _, dist = _pair_distances(pos)
        iu = np.triu_indices(n, k=1)
        if n < 2 or dist[iu].min() > 0:
            return pos
        pos = pos + magnitude * (np.array(
            [[rng.uniform(-1, 1), rng.uniform(-1, 1)] for _ in range(n)]
        ))
    raise LayoutError("coincident positions persist after jitter budget")


def _energy(pos, edges, weights, params):
    e = 0.0
    if len(edges):
        d = np.linalg.norm(pos[edges[:, 0]] - pos[edges[:, 1]], axis=1)
        e += params.attraction * float((weights * d).sum())
    n = len(pos)
    if n >= 2:
        _, dist = _pair_distances(pos)
        iu = np.triu_indices(n, k=1)
        e -= params.repulsion * float(np.log(dist[iu]).sum())
    return e


def _gradient(pos, edges, weights, params):
    grad = np.zeros_like(pos)
    if len(edges):
        delta = pos[edges[:, 0]] - pos[edges[:, 1]]
        d = np.linalg.norm(delta, axis=1)
        unit = delta / d[:, None]
        contrib = params.attraction * weights[:, None] * unit
        np.add.at(grad, edges[:, 0], contrib)
        np.add.at(grad, edges[:, 1], -contrib)
    n = len(pos)
    if n >= 2:
        diff, dist = _pair_distances(pos)
        np.fill_diagonal(dist, 1.0)
        rep = diff / (dist**2)[:, :, None]
        np.fill_diagonal(rep[:, :, 0], 0.0)
        np.fill_diagonal(rep[:, :, 1], 0.0)
        grad -= params.repulsion * rep.sum(axis=1)
    return grad


def linlog_energy(state, weighted_edges, params=None):
    """Total layout energy of the current positions.

    ``weighted_edges`` is a list of (group_u, group_v, weight) with
    weight = underlying-edge multiplicity.
    """
    params = params or LinLogParams()
    _, _, pos, edges, weights = _as_arrays(state, weighted_edges)
    if len(pos) >= 2:
        _, dist = _pair_distances(pos)
        iu = np.triu_indices(len(pos), k=1)
        if dist[iu].min() == 0:
            raise LayoutError("coincident group positions")
    return _energy(pos, edges, weights, params)


def linlog_gradient(state, weighted_edges, params=None):
    """Analytic gradient of the energy, keyed by group id."""
    params = params or LinLogParams()
    gids, _, pos, edges, weights = _as_arrays(state, weighted_edges)
    grad = _gradient(pos, edges, weights, params)
    return {g: (float(grad[i, 0]), float(grad[i, 1])) for i, g in enumerate(gids)}


def relax(state, weighted_edges, params=None, seed=0, free=None):
    """Descend the energy until convergence or the iteration cap.

    Pinned groups (and any group outside ``free`` when given) keep their
    exact coordinates.  Returns a RelaxResult whose ``energies`` lists the
    accepted iterates' energies (non-increasing).
    """
    params = params or LinLogParams()
    gids, index, pos, edges, weights = _as_arrays(state, weighted_edges)
    if len(gids) < 2:
        return RelaxResult(state, [], 0)
    rng = random.Random(seed)
    pos = _jitter(pos, rng, params.jitter)

    frozen = set(state.pinned)
    if free is not None:
        frozen |= set(gids) - set(free)
    mask = np.array([[0.0, 0.0] if g in frozen else [1.0, 1.0] for g in gids])

    step = params.initial_step
    energy = _energy(pos, edges, weights, params)
    energies = [energy]
    iterations = 0
    for _ in range(params.max_iterations):
        grad = _gradient(pos, edges, weights, params) * mask
        gnorm = float(np.linalg.norm(grad))
        if gnorm < params.convergence:
            break
        accepted = False
        while step > 1e-12:
            cand = pos - step * grad
            _, dist = _pair_distances(cand)
            iu = np.triu_indices(len(cand), k=1)
            if dist[iu].min() > 0:
                cand_energy = _energy(cand, edges, weights, params)
                if cand_energy <= energy:
                    pos, energy = cand, cand_energy
                    step *= params.step_growth
                    accepted = True
                    break
            step *= 0.5
        iterations += 1
        if not accepted:
            break
        energies.append(energy)
        if len(energies) >= 2 and abs(energies[-2] - energies[-1]) < params.convergence:
            break

    positions = dict(state.positions)
    for i, g in enumerate(gids):
        if g not in frozen:
            positions[g] = (float(pos[i, 0]), float(pos[i, 1]))
    return RelaxResult(replace(state, positions=positions), energies, iterations)


def initial_layout(group_ids, weighted_edges, params=None, seed=0, spread=10.0):
    """Seeded random placement followed by a full relax."""
    rng = random.Random(seed)
    positions = {
        g: (rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        for g in sorted(group_ids)
    }
    state = LayoutState(positions)
    return relax(state, weighted_edges, params, seed=seed).state


# -- incremental updates ---------------------------------------------------


def place_aggregate(state, new_gid, constituent_gids):
    """New group at the centroid of its constituents; constituents removed."""
    pts = [state.positions[g] for g in constituent_gids]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    positions = {g: p for g, p in state.positions.items() if g not in set(constituent_gids)}
    positions[new_gid] = (cx, cy)
    pinned = frozenset(g for g in state.pinned if g in positions)
    half = {g: h for g, h in state.half_diagonal.items() if g in positions}
    return LayoutState(positions, pinned, half)


def place_split(state, old_gid, new_gids):
    """Split members on a circle of radius = old glyph half-diagonal."""
    cx, cy = state.positions[old_gid]
    r = state.half_diagonal.get(old_gid, 1.0)
    positions = {g: p for g, p in state.positions.items() if g != old_gid}
    n = len(new_gids)
    for k, g in enumerate(new_gids):
        angle = 2.0 * math.pi * k / n
        positions[g] = (cx + r * math.cos(angle), cy + r * math.sin(angle))
    pinned = frozenset(g for g in state.pinned if g in positions)
    half = {g: h for g, h in state.half_diagonal.items() if g != old_gid}
    return LayoutState(positions, pinned, half)


def place_transfer(state, removed_gids, added, near=None):
    """Generic placement after add/extract/move/merge edits.

    ``added`` maps new GroupId -> seed position (centroid of the groups it
    came from, or ``near`` offset for freshly extracted singletons).
    """
    positions = {g: p for g, p in state.positions.items() if g not in set(removed_gids)}
    positions.update({g: (float(x), float(y)) for g, (x, y) in added.items()})
    pinned = frozenset(g for g in state.pinned if g in positions)
    half = {g: h for g, h in state.half_diagonal.items() if g in positions}
    return LayoutState(positions, pinned, half)


def incremental_relax(state, weighted_edges, free_gids, params=None, seed=0):
    """Short local relax: only the named groups move, everything else is
    exactly preserved."""
    params = params or LinLogParams()
    local = replace(params, max_iterations=min(params.max_iterations, 50))
    return relax(state, weighted_edges, local, seed=seed, free=set(free_gids)).state


def remove_overlaps(state, passes=10, padding=0.0):
    """Push overlapping glyph bounding disks apart along the center axis."""
    positions = dict(state.positions)
    gids = sorted(positions)
    for _ in range(passes):
        moved = False
        for i, a in enumerate(gids):
            for b in gids[i + 1 :]:
                ra = state.half_diagonal.get(a, 0.5)
                rb = state.half_diagonal.get(b, 0.5)
                ax, ay = positions[a]
                bx, by = positions[b]
                dx, dy = bx - ax, by - ay
                d = math.hypot(dx, dy)
                need = ra + rb + padding
                if d >= need:
                    continue
                if d == 0:
                    dx, dy, d = 1.0, 0.0, 1.0
                push = (need - d) / 2.0
                ux, uy = dx / d, dy / d
                if a not in state.pinned:
                    positions[a] = (ax - ux * push, ay - uy * push)
                if b not in state.pinned:
                    positions[b] = (bx + ux * push, by + uy * push)
                moved = True
        if not moved:
            break
    return replace(state, positions=positions)


def weighted_edges_from_grouping(grouping_state):
    """Aggregated edges as (gid, gid, multiplicity) triples."""
    return [
        (u, v, float(len(eids)))
        for (u, v), eids in sorted(grouping_state.aggregated_edges().items())
    ]
