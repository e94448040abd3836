import { describe, expect, it } from "vitest";

import { GestureController } from "../src/gestures";
import { RecordingSink } from "../src/protocol";
import { matrixGlyph } from "./fixtures";

/** Pure-matrix window over four underlying nodes a..d. */
function pureMatrixView() {
  return matrixGlyph(99, 0, 0, [0, 1, 2, 3], ["a", "b", "c", "d"], [
    { row: 0, col: 2, filled: true, fill: "#000", count: 1 },
    { row: 2, col: 0, filled: true, fill: "#000", count: 1 },
    { row: 1, col: 3, filled: true, fill: "#000", count: 1 },
    { row: 3, col: 1, filled: true, fill: "#000", count: 1 },
  ]);
}

function controller() {
  const sink = new RecordingSink();
  return { sink, gc: new GestureController(sink, { items: [] }) };
}

describe("dual-view drop union rule", () => {
  it("a single selected cell yields the two-member endpoint union", () => {
    const { sink, gc } = controller();
    const result = gc.dualViewDrop(
      pureMatrixView(),
      { cells: [{ row: 0, col: 2 }] },
      new Set(),
    );
    expect(result.outcome).toBe("commit");
    expect(sink.commands).toEqual([
      { cmd: "aggregate", args: { nodes: ["a", "c"] } },
    ]);
  });

  it("multiple cells yield the exact union of all endpoints", () => {
    const { sink, gc } = controller();
    gc.dualViewDrop(
      pureMatrixView(),
      {
        cells: [
          { row: 0, col: 2 },
          { row: 1, col: 3 },
          { row: 2, col: 0 }, // mirror of the first: no new endpoints
        ],
      },
      new Set(),
    );
    expect(sink.commands).toEqual([
      { cmd: "aggregate", args: { nodes: ["a", "b", "c", "d"] } },
    ]);
  });

  it("an axis selection carries exactly the selected members", () => {
    const { sink, gc } = controller();
    gc.dualViewDrop(pureMatrixView(), { ordinals: [0, 1, 3] }, new Set());
    expect(sink.commands).toEqual([
      { cmd: "aggregate", args: { nodes: ["a", "b", "d"] } },
    ]);
  });

  it("a repeated drop of already-grouped nodes is rejected", () => {
    const { sink, gc } = controller();
    const result = gc.dualViewDrop(
      pureMatrixView(),
      { cells: [{ row: 0, col: 2 }] },
      new Set([0]), // node "a" already lives in a multi-member group
    );
    expect(result.outcome).toBe("cancel");
    expect(sink.commands).toHaveLength(0);
  });

  it("an empty selection shakes and sends nothing", () => {
    const { sink, gc } = controller();
    expect(gc.dualViewDrop(pureMatrixView(), {}, new Set()).outcome).toBe("shake");
    expect(sink.commands).toHaveLength(0);
  });
});
