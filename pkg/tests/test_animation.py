import math
import random

import pytest

from matlink import animation as A
from matlink import grouping as gr
from matlink import layout as L
from matlink import scene as S
from conftest import make_doc, random_doc

K4 = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]


def plan_for(doc, members, spec=None, seed=0):
    state = gr.initial_state(doc)
    state, gid = gr.aggregate(doc, state, members)
    lay = L.LayoutState({g: (7.0 * i, 0.0) for i, g in enumerate(state.group_ids())})
    return A.plan_transition(doc, state, lay, gid, spec), doc, state, lay, gid


class TestEndpoints:
    def test_t0_is_source_scene(self):
        plan, doc, state, lay, gid = plan_for(make_doc(K4), [0, 1, 2])
        kf = plan.sample(0.0)
        assert kf.scene is not None
        assert S.scene_hash(kf.scene) == S.scene_hash(plan.source_scene)

    def test_t1_is_target_scene(self):
        plan, doc, state, lay, gid = plan_for(make_doc(K4), [0, 1, 2])
        kf = plan.sample(1.0)
        assert S.scene_hash(kf.scene) == S.scene_hash(
            S.matrix_fragment(doc, state, lay, gid))

    def test_group_size_one_rejected(self):
        doc = make_doc(K4)
        state = gr.initial_state(doc)
        lay = L.LayoutState({g: (3.0 * g, 0.0) for g in state.group_ids()})
        with pytest.raises(A.AnimationError):
            A.plan_transition(doc, state, lay, state.membership[0])

    def test_out_of_range_t(self):
        plan, *_ = plan_for(make_doc(K4), [0, 1])
        with pytest.raises(A.AnimationError):
            plan.sample(1.5)
        with pytest.raises(A.AnimationError):
            plan.sample(-0.1)


class TestCornerCoincidence:
    def test_two_node_one_edge_corner_at_cell_center(self):
        doc = make_doc([("a", "b")])
        plan, doc, state, lay, gid = plan_for(doc, [0, 1])
        t_b_end = plan.spec.stage_split[0] + plan.spec.stage_split[1]
        kf = plan.sample(t_b_end)
        glyph = plan.glyph
        primary = [e for e in kf.edges if e.copy == "primary"][0]
        cx, cy = glyph.cell_center(0, 1)
        assert abs(primary.corner[0] - cx) < 1e-9
        assert abs(primary.corner[1] - cy) < 1e-9

    def test_every_edge_corner_lands_on_its_cell(self, rng):
        doc = random_doc(rng, 6, 0.6)
        plan, doc, state, lay, gid = plan_for(doc, list(range(6)))
        t_b_end = plan.spec.stage_split[0] + plan.spec.stage_split[1]
        kf = plan.sample(t_b_end)
        glyph = plan.glyph
        ordinal = {n: i for i, n in enumerate(glyph.members)}
        for e in kf.edges:
            _, s, t = doc.edges[e.eid]
            i, j = sorted((ordinal[s], ordinal[t]))
            want = glyph.cell_center(i, j) if e.copy == "primary" else glyph.cell_center(j, i)
            assert abs(e.corner[0] - want[0]) < 1e-9
            assert abs(e.corner[1] - want[1]) < 1e-9


class TestStaging:
    def test_edges_duplicate_in_stage_a(self):
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2])
        kf = plan.sample(0.075)  # middle of stage A
        primaries = [e for e in kf.edges if e.copy == "primary"]
        mirrors = [e for e in kf.edges if e.copy == "mirror"]
        assert len(primaries) == len(mirrors) == 3
        for p, m in zip(primaries, mirrors):
            assert p.opacity == 1.0
            assert 0.0 < m.opacity < 1.0  # fading in
            assert p.points[0] == m.points[-1] or p.points == m.points

    def test_matrix_cells_fade_in_during_stage_c(self):
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2])
        early = plan.sample(0.75)
        late = plan.sample(0.95)
        assert 0.0 < early.matrix_opacity < late.matrix_opacity < 1.0

    def test_corners_outlast_edge_bodies(self):
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2])
        kf = plan.sample(0.9)  # deep in the cross-fade
        for e in kf.edges:
            assert e.corner_opacity >= e.opacity
        assert any(e.corner_opacity > e.opacity for e in kf.edges)

    def test_upper_half_extent_has_no_mirrors(self):
        spec = A.AnimationSpec(matrix_extent="upper-half")
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2], spec)
        kf = plan.sample(0.5)
        assert all(e.copy == "primary" for e in kf.edges)

    def test_sides_placement_duplicates_nodes(self):
        spec = A.AnimationSpec(node_placement="sides")
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2], spec)
        kf = plan.sample(0.5)
        copies = {(n.node, n.copy) for n in kf.nodes}
        for n in plan.members:
            assert (n, "row") in copies and (n, "col") in copies


class TestContinuity:
    def test_positions_lipschitz_on_dense_grid(self):
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2, 3])
        steps = 400
        prev = None
        for k in range(1, steps):  # interior only; endpoints carry exact scenes
            kf = plan.sample(k / steps)
            coords = {(n.node, n.copy): (n.x, n.y) for n in kf.nodes}
            if prev is not None:
                for key, (x, y) in coords.items():
                    px, py = prev[key]
                    assert math.hypot(x - px, y - py) < 0.5  # ~bound/steps
            prev = coords

    def test_monotone_coordinates_in_simultaneous_stage_b(self):
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2])
        ta = plan.spec.stage_split[0]
        tb = ta + plan.spec.stage_split[1]
        grid = [ta + (tb - ta) * k / 50 for k in range(1, 50)]
        tracks = {}
        for t in grid:
            for n in plan.sample(t).nodes:
                tracks.setdefault((n.node, n.copy), []).append((n.x, n.y))
        for pts in tracks.values():
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            for vals in (xs, ys):
                diffs = [b - a for a, b in zip(vals, vals[1:])]
                assert all(d >= -1e-9 for d in diffs) or all(d <= 1e-9 for d in diffs)


class TestSequencing:
    def test_single_element_full_slot(self):
        spec = A.AnimationSpec(sequencing="per-edge")
        assert A.sequence_schedule(spec, 1) == [(0.0, 1.0)]

    def test_equal_slots_without_acceleration(self):
        spec = A.AnimationSpec(sequencing="per-edge")
        slots = A.sequence_schedule(spec, 4)
        widths = [b - a for a, b in slots]
        assert widths == pytest.approx([0.25] * 4)
        assert slots[0][0] == 0.0 and slots[-1][1] == 1.0

    def test_geometric_acceleration(self):
        spec = A.AnimationSpec(sequencing="per-edge", accelerate=True, accel_ratio=0.85)
        slots = A.sequence_schedule(spec, 4)
        raw = [1.0, 0.85, 0.7225, 0.614125]
        total = sum(raw)
        widths = [b - a for a, b in slots]
        assert widths == pytest.approx([r / total for r in raw])

    def test_per_node_motion_confined_to_slot(self):
        spec = A.AnimationSpec(sequencing="per-node")
        plan, *_ = plan_for(make_doc(K4), [0, 1, 2, 3], spec)
        ta = plan.spec.stage_split[0]
        tb = ta + plan.spec.stage_split[1]
        slots = A.sequence_schedule(spec, 4)
        for idx, member in enumerate(plan.members):
            u0, u1 = slots[idx]
            before = plan.sample(ta + (tb - ta) * max(0.0, u0 - 0.01))
            after = plan.sample(ta + (tb - ta) * min(1.0, u1 + 0.01))
            start = [(n.x, n.y) for n in before.nodes if n.node == member][0]
            end = [(n.x, n.y) for n in after.nodes if n.node == member][0]
            src = plan.source_positions[member]
            target = plan._diag_pos(idx)
            # outside its slot the node sits at an endpoint of its own motion
            assert (math.dist(start, src) < 1e-9) or u0 <= 0.011
            assert (math.dist(end, target) < 1e-9) or u1 >= 0.989

    def test_zero_elements_rejected(self):
        with pytest.raises(A.AnimationError):
            A.sequence_schedule(A.AnimationSpec(), 0)


class TestReversibility:
    def test_reverse_is_time_mirror(self):
        import dataclasses

        fwd, doc, state, lay, gid = plan_for(make_doc(K4), [0, 1, 2])
        spec_rev = A.AnimationSpec(direction="to-node-link")
        rev = A.plan_transition(doc, state, lay, gid, spec_rev)
        # dyadic grid: 1 - (1 - t) is exact, so equality is bitwise
        for t in (0.0, 0.125, 0.25, 0.5, 0.75, 0.875, 1.0):
            a = fwd.sample(t)
            b = rev.sample(1.0 - t)
            a = dataclasses.replace(a, t=0.0)
            b = dataclasses.replace(b, t=0.0)
            assert dataclasses.asdict(a) == dataclasses.asdict(b)


class TestSpecValidation:
    def test_bad_duration(self):
        with pytest.raises(A.AnimationError):
            A.AnimationSpec(duration=0)

    def test_bad_stage_split(self):
        with pytest.raises(A.AnimationError):
            A.AnimationSpec(stage_split=(0.5, 0.5, 0.5))

    def test_duration_presets(self):
        assert A.EXPERT_DURATION == 0.5
        assert A.NOVICE_DURATION == 3.0

    def test_spec_roundtrip(self):
        spec = A.AnimationSpec(sequencing="per-edge", accelerate=True)
        again = A.spec_from_dict(spec.to_dict())
        assert again == spec
