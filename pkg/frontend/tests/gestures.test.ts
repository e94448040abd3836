import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { GestureController } from "../src/gestures";
import { RecordingSink } from "../src/protocol";
import { twoMatrixScene } from "./fixtures";

function controller() {
  const sink = new RecordingSink();
  return { sink, gc: new GestureController(sink, twoMatrixScene()) };
}

describe("gesture-to-command conformance (golden log)", () => {
  it("scripted traces emit exactly the recorded command log", () => {
    const { sink, gc } = controller();

    // aggregate: lasso around the two free nodes
    expect(
      gc.lassoAggregate([
        [-1, -1],
        [3, -1],
        [3, 1],
        [-1, 1],
      ]).outcome,
    ).toBe("commit");

    // split: right-click on matrix A
    expect(gc.rightClickSplit(10, 10).outcome).toBe("commit");

    // add: drag free node f onto matrix A
    expect(gc.beginDrag(0, 0)).toBe(true);
    expect(gc.endDrag(10, 10).outcome).toBe("commit");

    // extract: drag axis item "a" (row header of A) to empty canvas
    expect(gc.beginDrag(8.0, 9.0)).toBe(true);
    expect(gc.endDrag(0, 20).outcome).toBe("commit");

    // move: drag axis item "b" from A onto matrix B
    expect(gc.beginDrag(8.0, 10.0)).toBe(true);
    expect(gc.endDrag(20, 10).outcome).toBe("commit");

    // merge: drag matrix A onto matrix B
    expect(gc.beginDrag(10, 10)).toBe(true);
    expect(gc.endDrag(20, 10).outcome).toBe("commit");

    // reorder: drag axis item "a" down its own header to ordinal 2
    expect(gc.beginDrag(8.0, 9.0)).toBe(true);
    expect(gc.endDrag(8.0, 11.0).outcome).toBe("commit");

    // cancel: drop an axis item back where it started — no command
    expect(gc.beginDrag(8.0, 9.0)).toBe(true);
    expect(gc.endDrag(8.0, 9.0).outcome).toBe("cancel");

    const golden = JSON.parse(
      readFileSync(new URL("./golden/commands.json", import.meta.url), "utf-8"),
    );
    expect(sink.commands).toEqual(golden);
  });
});

describe("gesture rules", () => {
  it("every completed gesture maps to exactly one command", () => {
    const { sink, gc } = controller();
    gc.beginDrag(0, 0);
    gc.endDrag(10, 10); // add
    expect(sink.commands).toHaveLength(1);
  });

  it("cancel paths send nothing", () => {
    const { sink, gc } = controller();
    gc.beginDrag(10, 10);
    expect(gc.cancelDrag().outcome).toBe("cancel");
    gc.beginDrag(8.0, 9.0);
    gc.endDrag(8.0, 9.0); // dropped back on its own header slot
    expect(sink.commands).toHaveLength(0);
  });

  it("empty lasso shakes and sends nothing", () => {
    const { sink, gc } = controller();
    expect(
      gc.lassoAggregate([
        [100, 100],
        [101, 100],
        [101, 101],
        [100, 101],
      ]).outcome,
    ).toBe("shake");
    expect(sink.commands).toHaveLength(0);
  });

  it("lasso over one matrix plus nodes adds the nodes to it", () => {
    const { sink, gc } = controller();
    gc.lassoAggregate([
      [-1, -2],
      [12, -2],
      [12, 12],
      [-1, 12],
    ]); // covers matrix A and both free nodes, not matrix B
    expect(sink.commands).toEqual([
      { cmd: "add", args: { "node-group": 5, group: 10 } },
      { cmd: "add", args: { "node-group": 6, group: 10 } },
    ]);
  });

  it("lasso over several matrices aggregates the whole selection", () => {
    const { sink, gc } = controller();
    gc.lassoAggregate([
      [7, 7],
      [22, 7],
      [22, 13],
      [7, 13],
    ]); // both matrix centers, no free nodes
    expect(sink.commands).toEqual([
      { cmd: "aggregate", args: { groups: [10, 11] } },
    ]);
  });

  it("node dropped on another node aggregates their groups", () => {
    const { sink, gc } = controller();
    gc.beginDrag(0, 0);
    gc.endDrag(2, 0);
    expect(sink.commands).toEqual([
      { cmd: "aggregate", args: { groups: [5, 6] } },
    ]);
  });

  it("matrix dropped on empty canvas moves its group", () => {
    const { sink, gc } = controller();
    gc.beginDrag(10, 10);
    gc.endDrag(30, 30);
    expect(sink.commands).toEqual([
      { cmd: "move-group", args: { group: 10, x: 30, y: 30 } },
    ]);
  });

  it("drag shows the grabbed element's label", () => {
    const { gc } = controller();
    gc.beginDrag(8.0, 10.0); // axis item "b"
    expect(gc.state.active).toBe("drag-axis-item");
    expect(gc.state.dragLabel).toBe("b");
    gc.cancelDrag();
    expect(gc.state.active).toBe("idle");
    expect(gc.state.dragLabel).toBeNull();
  });

  it("drop-target highlight follows the pointer", () => {
    const { gc } = controller();
    gc.beginDrag(0, 0);
    gc.moveDrag(20, 10);
    expect(gc.state.dropHighlight).toBe(11);
    gc.moveDrag(30, 30);
    expect(gc.state.dropHighlight).toBeNull();
    gc.cancelDrag();
  });

  it("right-click outside any matrix cancels", () => {
    const { sink, gc } = controller();
    expect(gc.rightClickSplit(30, 30).outcome).toBe("cancel");
    expect(sink.commands).toHaveLength(0);
  });
});

describe("hover labels", () => {
  it("hovering a matrix reveals it and its neighbors, persistently", () => {
    const { gc } = controller();
    expect(gc.hoverLabels(10, 10)).toEqual(new Set([10, 11]));
    // pointer moved away: labels remain visible
    expect(gc.hoverLabels(30, 30)).toEqual(new Set([10, 11]));
    gc.dismissLabels();
    expect(gc.hoverLabels(30, 30)).toEqual(new Set());
  });
});
