/**
 * Scene JSON types (the engine's render model) plus the geometry queries the
 * gesture layer needs: hit testing, axis-item headers, cells, and lasso
 * containment.  The UI never derives scene content itself; it only reads
 * what the engine sent.
 */

export interface NodeGlyph {
  kind: "node";
  group: number;
  node: number;
  x: number;
  y: number;
  radius: number;
  fill: string;
  label: string;
}

export interface MatrixCell {
  row: number;
  col: number;
  filled: boolean;
  fill: string;
  count: number;
}

export interface MatrixGlyph {
  kind: "matrix";
  group: number;
  cx: number;
  cy: number;
  side: number;
  cell_size: number;
  members: number[];
  member_labels: string[];
  cells: MatrixCell[];
  label: string;
  axis_labels: boolean;
}

export interface EdgePath {
  kind: "link" | "band" | "aggregated";
  source_group: number;
  target_group: number;
  points: Array<[number, number]>;
  width: number;
  color: string;
  edge_ids: number[];
}

export interface SceneLabel {
  kind: "label";
  text: string;
  x: number;
  y: number;
  size: number;
  anchor: string;
}

export type SceneItem = NodeGlyph | MatrixGlyph | EdgePath | SceneLabel;

export interface Scene {
  items: SceneItem[];
}

export function matrices(scene: Scene): MatrixGlyph[] {
  return scene.items.filter((i): i is MatrixGlyph => i.kind === "matrix");
}

export function plainNodes(scene: Scene): NodeGlyph[] {
  return scene.items.filter((i): i is NodeGlyph => i.kind === "node");
}

export function edgePaths(scene: Scene): EdgePath[] {
  return scene.items.filter(
    (i): i is EdgePath =>
      i.kind === "link" || i.kind === "band" || i.kind === "aggregated",
  );
}

export function matrixLeft(m: MatrixGlyph): number {
  return m.cx - m.side / 2;
}

export function matrixTop(m: MatrixGlyph): number {
  return m.cy - m.side / 2;
}

export function cellCenter(m: MatrixGlyph, i: number, j: number): [number, number] {
  return [
    matrixLeft(m) + (j + 0.5) * m.cell_size,
    matrixTop(m) + (i + 0.5) * m.cell_size,
  ];
}

function inMatrixBody(m: MatrixGlyph, x: number, y: number): boolean {
  const l = matrixLeft(m);
  const t = matrixTop(m);
  return x >= l && x <= l + m.side && y >= t && y <= t + m.side;
}

/**
 * Axis items live in a one-cell-wide header band along the left edge (rows)
 * and the top edge (columns) of the glyph.
 */
export function axisItemAt(
  m: MatrixGlyph,
  x: number,
  y: number,
): { ordinal: number; node: number } | null {
  const l = matrixLeft(m);
  const t = matrixTop(m);
  const inRows = x >= l - m.cell_size && x < l && y >= t && y <= t + m.side;
  const inCols = y >= t - m.cell_size && y < t && x >= l && x <= l + m.side;
  let ordinal: number;
  if (inRows) {
    ordinal = Math.min(m.members.length - 1, Math.floor((y - t) / m.cell_size));
  } else if (inCols) {
    ordinal = Math.min(m.members.length - 1, Math.floor((x - l) / m.cell_size));
  } else {
    return null;
  }
  return { ordinal, node: m.members[ordinal] };
}

/** Cell under the pointer, or null when outside the glyph body. */
export function cellAt(
  m: MatrixGlyph,
  x: number,
  y: number,
): { row: number; col: number } | null {
  if (!inMatrixBody(m, x, y)) return null;
  const col = Math.min(
    m.members.length - 1,
    Math.floor((x - matrixLeft(m)) / m.cell_size),
  );
  const row = Math.min(
    m.members.length - 1,
    Math.floor((y - matrixTop(m)) / m.cell_size),
  );
  return { row, col };
}

export type HitTarget =
  | { type: "matrix"; matrix: MatrixGlyph }
  | { type: "axis-item"; matrix: MatrixGlyph; ordinal: number; node: number }
  | { type: "node"; node: NodeGlyph }
  | { type: "canvas" };

/**
 * Topmost glyph under the pointer.  Matrices beat nodes on overlap; an axis
 * header hit resolves to the axis item rather than the matrix; later scene
 * items are drawn on top and therefore win ties within a class.
 */
export function hitTest(scene: Scene, x: number, y: number): HitTarget {
  for (const m of matrices(scene).slice().reverse()) {
    const axis = axisItemAt(m, x, y);
    if (axis !== null) return { type: "axis-item", matrix: m, ...axis };
    if (inMatrixBody(m, x, y)) return { type: "matrix", matrix: m };
  }
  for (const n of plainNodes(scene).slice().reverse()) {
    if (Math.hypot(x - n.x, y - n.y) <= n.radius) return { type: "node", node: n };
  }
  return { type: "canvas" };
}

/** Even-odd point-in-polygon test for lasso selection. */
export function pointInPolygon(
  polygon: Array<[number, number]>,
  x: number,
  y: number,
): boolean {
  let inside = false;
  for (let i = 0, j = polygon.length - 1; i < polygon.length; j = i++) {
    const [xi, yi] = polygon[i];
    const [xj, yj] = polygon[j];
    if (yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}
