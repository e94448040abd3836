import json
import os

import pytest

from matlink import cli

K4_CSV = "a,b\na,c\na,d\nb,c\nb,d\nc,d\n"


@pytest.fixture
def k4_file(tmp_path):
    path = tmp_path / "k4.csv"
    path.write_text(K4_CSV)
    return str(path)


def run(argv):
    return cli.main(argv)


class TestStats:
    def test_k4_report(self, k4_file, tmp_path, capsys):
        out = tmp_path / "stats.tsv"
        assert run(["stats", "--graph", k4_file, "--out", str(out)]) == 0
        rows = dict(line.split("\t") for line in out.read_text().splitlines()[1:])
        assert rows["nodes"] == "4"
        assert rows["edges"] == "6"
        assert rows["components"] == "1"
        assert rows["clustering_coefficient"].startswith("1.0")

    def test_figures_written(self, k4_file, tmp_path):
        figdir = tmp_path / "figs"
        assert run(["stats", "--graph", k4_file, "--out",
                    str(tmp_path / "s.tsv"), "--figures", str(figdir)]) == 0
        assert (figdir / "degree_distribution.png").exists()
        assert (figdir / "component_sizes.png").exists()

    def test_missing_file_is_data_error(self, tmp_path):
        assert run(["stats", "--graph", str(tmp_path / "none.csv")]) == cli.EXIT_DATA

    def test_usage_error(self):
        assert run(["stats"]) == cli.EXIT_USAGE


class TestRender:
    def test_all_singletons_node_link(self, k4_file, tmp_path):
        out = tmp_path / "out.svg"
        assert run(["render", "--graph", k4_file, "--out", str(out), "--seed", "1"]) == 0
        svg = out.read_bytes()
        assert svg.count(b'class="node"') == 4
        assert b'class="matrix"' not in svg

    def test_fixed_seed_byte_identical(self, k4_file, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        for out in (a, b):
            assert run(["render", "--graph", k4_file, "--out", str(out),
                        "--seed", "42"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_k4_group_renders_matrix(self, k4_file, tmp_path):
        groups = tmp_path / "groups.json"
        groups.write_text(json.dumps(
            {"groups": [{"id": 10, "members": ["a", "b", "c", "d"]}]}))
        out = tmp_path / "m.svg"
        assert run(["render", "--graph", k4_file, "--groups", str(groups),
                    "--out", str(out), "--seed", "1"]) == 0
        svg = out.read_bytes()
        assert svg.count(b'<g class="matrix"') == 1
        assert svg.count(b'class="cell"') == 12  # 6 undirected edges, both halves

    def test_unknown_node_in_grouping(self, k4_file, tmp_path):
        groups = tmp_path / "groups.json"
        groups.write_text(json.dumps({"groups": [{"members": ["zz"]}]}))
        code = run(["render", "--graph", k4_file, "--groups", str(groups),
                    "--out", str(tmp_path / "x.svg")])
        assert code == cli.EXIT_DATA


class TestAnimate:
    def _groups_file(self, tmp_path):
        groups = tmp_path / "groups.json"
        groups.write_text(json.dumps(
            {"groups": [{"id": 10, "members": ["a", "b", "c"]}]}))
        return str(groups)

    def test_frames_and_manifest(self, k4_file, tmp_path):
        outdir = tmp_path / "frames"
        assert run(["animate", "--graph", k4_file,
                    "--groups", self._groups_file(tmp_path),
                    "--group", "10", "--frames", "5",
                    "--out", str(outdir), "--seed", "1"]) == 0
        manifest = json.loads((outdir / "manifest.json").read_text())
        assert len(manifest["frames"]) == 5
        for entry in manifest["frames"]:
            assert (outdir / entry["file"]).exists()

    def test_two_frames_are_the_static_renders(self, k4_file, tmp_path):
        outdir = tmp_path / "two"
        assert run(["animate", "--graph", k4_file,
                    "--groups", self._groups_file(tmp_path),
                    "--group", "10", "--frames", "2",
                    "--out", str(outdir), "--seed", "1"]) == 0
        first = (outdir / "frame_0000.svg").read_bytes()
        last = (outdir / "frame_0001.svg").read_bytes()
        assert b'class="matrix"' not in first  # node-link depiction
        assert b'class="matrix"' in last

    def test_reversed_direction_reverses_frames(self, k4_file, tmp_path):
        fwd, rev = tmp_path / "fwd", tmp_path / "rev"
        for outdir, direction in ((fwd, "to-matrix"), (rev, "to-node-link")):
            assert run(["animate", "--graph", k4_file,
                        "--groups", self._groups_file(tmp_path),
                        "--group", "10", "--frames", "5",
                        "--direction", direction,
                        "--out", str(outdir), "--seed", "1"]) == 0
        f = [(fwd / ("frame_%04d.svg" % k)).read_bytes() for k in range(5)]
        r = [(rev / ("frame_%04d.svg" % k)).read_bytes() for k in range(5)]
        assert r == f[::-1]

    def test_group_too_small(self, k4_file, tmp_path):
        groups = tmp_path / "g1.json"
        groups.write_text(json.dumps({"groups": [{"id": 10, "members": ["a"]}]}))
        code = run(["animate", "--graph", k4_file, "--groups", str(groups),
                    "--group", "10", "--out", str(tmp_path / "x")])
        assert code == cli.EXIT_DATA


class TestSuggest:
    def test_two_disjoint_k4s(self, tmp_path):
        csv = "\n".join("x%d,x%d" % (a, b) for a in range(4) for b in range(a + 1, 4))
        csv += "\n" + "\n".join("y%d,y%d" % (a, b) for a in range(4) for b in range(a + 1, 4))
        path = tmp_path / "two.csv"
        path.write_text(csv + "\n")
        out = tmp_path / "suggested.json"
        assert run(["suggest", "--graph", str(path), "--out", str(out)]) == 0
        obj = json.loads(out.read_text())
        members = sorted(sorted(g["members"]) for g in obj["groups"])
        assert members == [["x0", "x1", "x2", "x3"], ["y0", "y1", "y2", "y3"]]

    def test_empty_graph(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        out = tmp_path / "empty.json"
        assert run(["suggest", "--graph", str(path), "--out", str(out)]) == 0
        assert json.loads(out.read_text()) == {"groups": []}

    def test_output_is_valid_partition(self, tmp_path):
        from matlink import graph as graph_mod
        from matlink import grouping as gr

        doc = graph_mod.small_world_graph(30, 4, 0.1, seed=3)
        path = tmp_path / "sw.json"
        path.write_bytes(graph_mod.serialize_graph_json(doc))
        out = tmp_path / "sw_groups.json"
        assert run(["suggest", "--graph", str(path), "--out", str(out)]) == 0
        state = gr.state_from_dict(doc, json.loads(out.read_text()))
        gr.check_invariants(doc, state)


class TestClassify:
    def test_table_output(self, k4_file, tmp_path, capsys):
        groups = tmp_path / "groups.json"
        groups.write_text(json.dumps(
            {"groups": [{"id": 10, "members": ["a", "b", "c", "d"]}]}))
        assert run(["classify", "--graph", k4_file, "--groups", str(groups)]) == 0
        out = capsys.readouterr().out
        assert "block" in out

    def test_json_output(self, k4_file, tmp_path):
        groups = tmp_path / "groups.json"
        groups.write_text(json.dumps(
            {"groups": [{"id": 10, "members": ["a", "b", "c", "d"]}]}))
        jpath = tmp_path / "report.json"
        assert run(["classify", "--graph", k4_file, "--groups", str(groups),
                    "--json-out", str(jpath)]) == 0
        reports = json.loads(jpath.read_text())
        assert reports[0]["pattern"] == "block"


class TestGenerate:
    def test_roundtrips_through_stats(self, tmp_path, capsys):
        out = tmp_path / "sw.json"
        assert run(["generate", "--nodes", "50", "--neighbors", "4",
                    "--rewire", "0.1", "--seed", "2", "--out", str(out)]) == 0
        assert run(["stats", "--graph", str(out)]) == 0
        rows = dict(line.split("\t")
                    for line in capsys.readouterr().out.splitlines()[1:])
        assert rows["nodes"] == "50"
