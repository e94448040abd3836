import { MatrixCell, MatrixGlyph, NodeGlyph, Scene } from "../src/scene";

export function matrixGlyph(
  group: number,
  cx: number,
  cy: number,
  members: number[],
  labels: string[],
  cells: MatrixCell[] = [],
): MatrixGlyph {
  return {
    kind: "matrix",
    group,
    cx,
    cy,
    side: members.length,
    cell_size: 1,
    members,
    member_labels: labels,
    cells,
    label: labels.join("+"),
    axis_labels: true,
  };
}

export function nodeGlyph(
  group: number,
  node: number,
  x: number,
  y: number,
  label: string,
): NodeGlyph {
  return { kind: "node", group, node, x, y, radius: 0.5, fill: "#999999", label };
}

/**
 * Canvas used by the gesture tests:
 *  - matrix A: group 10, members a/b/c, centered at (10, 10), 3x3, unit cells
 *  - matrix B: group 11, members d/e, centered at (20, 10), 2x2, unit cells
 *  - free nodes f (group 5) at (0, 0) and g (group 6) at (2, 0)
 *  - one aggregated edge between the two matrices
 */
export function twoMatrixScene(): Scene {
  return {
    items: [
      {
        kind: "aggregated",
        source_group: 10,
        target_group: 11,
        points: [
          [11.5, 10],
          [19, 10],
        ],
        width: 2,
        color: "#555555",
        edge_ids: [7],
      },
      matrixGlyph(10, 10, 10, [0, 1, 2], ["a", "b", "c"]),
      matrixGlyph(11, 20, 10, [3, 4], ["d", "e"]),
      nodeGlyph(5, 5, 0, 0, "f"),
      nodeGlyph(6, 6, 2, 0, "g"),
    ],
  };
}
