/**
 * Gesture layer: turns pointer traces over the current Scene into session
 * protocol commands.  Every completed gesture maps to exactly one command
 * (or, for a lasso over several elements, one command per absorbed element);
 * cancel paths send nothing.  The UI holds no authoritative state — scenes
 * arrive from the engine, commands go back.
 */

import { CommandSink } from "./protocol";
import {
  HitTarget,
  MatrixGlyph,
  NodeGlyph,
  Scene,
  cellAt,
  edgePaths,
  hitTest,
  matrices,
  matrixTop,
  plainNodes,
  pointInPolygon,
} from "./scene";

export type GestureKind =
  | "idle"
  | "drag-node"
  | "drag-matrix"
  | "drag-axis-item"
  | "lasso"
  | "slider";

export interface GestureState {
  active: GestureKind;
  /** Label shown next to the pointer while dragging. */
  dragLabel: string | null;
  /** Group id of the glyph currently highlighted as a drop target. */
  dropHighlight: number | null;
  /** Animation playhead position in [0, 1]. */
  playhead: number;
}

interface Grab {
  target: HitTarget;
  startX: number;
  startY: number;
}

export type GestureResult =
  | { outcome: "commit" }
  | { outcome: "cancel" }
  | { outcome: "shake" };

export class GestureController {
  readonly state: GestureState = {
    active: "idle",
    dragLabel: null,
    dropHighlight: null,
    playhead: 0,
  };

  private grab: Grab | null = null;

  constructor(
    private sink: CommandSink,
    private scene: Scene,
  ) {}

  setScene(scene: Scene): void {
    this.scene = scene;
  }

  // -- drag and drop -------------------------------------------------------

  beginDrag(x: number, y: number): boolean {
    if (this.state.active !== "idle") return false;
    const target = hitTest(this.scene, x, y);
    switch (target.type) {
      case "node":
        this.state.active = "drag-node";
        this.state.dragLabel = target.node.label;
        break;
      case "matrix":
        this.state.active = "drag-matrix";
        this.state.dragLabel = target.matrix.label;
        break;
      case "axis-item":
        this.state.active = "drag-axis-item";
        this.state.dragLabel = target.matrix.member_labels[target.ordinal];
        break;
      case "canvas":
        return false;
    }
    this.grab = { target, startX: x, startY: y };
    return true;
  }

  moveDrag(x: number, y: number): void {
    if (this.grab === null) return;
    const over = hitTest(this.scene, x, y);
    this.state.dropHighlight =
      over.type === "matrix"
        ? over.matrix.group
        : over.type === "node"
          ? over.node.group
          : null;
  }

  endDrag(x: number, y: number): GestureResult {
    const grab = this.grab;
    this.resetGesture();
    if (grab === null) return { outcome: "cancel" };
    switch (grab.target.type) {
      case "node":
        return this.dropNode(grab.target.node, x, y);
      case "matrix":
        return this.dropMatrix(grab.target.matrix, x, y);
      case "axis-item":
        return this.dropAxisItem(grab.target.matrix, grab.target.ordinal, x, y);
      default:
        return { outcome: "cancel" };
    }
  }

  cancelDrag(): GestureResult {
    this.resetGesture();
    return { outcome: "cancel" };
  }

  private dropNode(node: NodeGlyph, x: number, y: number): GestureResult {
    const over = hitTest(this.scene, x, y);
    if (over.type === "matrix" || over.type === "axis-item") {
      this.sink.send("add", { "node-group": node.group, group: over.matrix.group });
      return { outcome: "commit" };
    }
    if (over.type === "node" && over.node.group !== node.group) {
      this.sink.send("aggregate", { groups: [node.group, over.node.group] });
      return { outcome: "commit" };
    }
    if (over.type === "canvas") {
      this.sink.send("move-group", { group: node.group, x, y });
      return { outcome: "commit" };
    }
    return { outcome: "cancel" };
  }

  private dropMatrix(m: MatrixGlyph, x: number, y: number): GestureResult {
    const over = hitTest(this.scene, x, y);
    if (
      (over.type === "matrix" || over.type === "axis-item") &&
      over.matrix.group !== m.group
    ) {
      this.sink.send("merge", { a: m.group, b: over.matrix.group });
      return { outcome: "commit" };
    }
    if (over.type === "canvas") {
      this.sink.send("move-group", { group: m.group, x, y });
      return { outcome: "commit" };
    }
    return { outcome: "cancel" };
  }

  private dropAxisItem(
    m: MatrixGlyph,
    ordinal: number,
    x: number,
    y: number,
  ): GestureResult {
    const label = m.member_labels[ordinal];
    const over = hitTest(this.scene, x, y);
    if (over.type === "canvas") {
      this.sink.send("extract", { group: m.group, node: label });
      return { outcome: "commit" };
    }
    if (
      (over.type === "matrix" || over.type === "axis-item") &&
      over.matrix.group !== m.group
    ) {
      this.sink.send("move", { from: m.group, node: label, to: over.matrix.group });
      return { outcome: "commit" };
    }
    if (over.type === "axis-item" || over.type === "matrix") {
      // same matrix: reorder to the drop ordinal, or cancel when dropped back
      const drop =
        over.type === "axis-item"
          ? over.ordinal
          : this.bodyOrdinal(over.matrix, x, y);
      if (drop === ordinal) return { outcome: "cancel" };
      this.sink.send("reorder", { group: m.group, node: label, ordinal: drop });
      return { outcome: "commit" };
    }
    return { outcome: "cancel" };
  }

  private bodyOrdinal(m: MatrixGlyph, x: number, y: number): number {
    const cell = cellAt(m, x, y);
    if (cell !== null) return cell.row;
    return Math.max(
      0,
      Math.min(
        m.members.length - 1,
        Math.floor((y - matrixTop(m)) / m.cell_size),
      ),
    );
  }

  private resetGesture(): void {
    this.grab = null;
    this.state.active = "idle";
    this.state.dragLabel = null;
    this.state.dropHighlight = null;
  }

  // -- lasso ---------------------------------------------------------------

  /**
   * Aggregate everything whose glyph center falls inside the closed polygon.
   * Free nodes only: one aggregate over their singleton groups.  With exactly
   * one matrix inside, free nodes are added to it.  With several matrices the
   * whole selection aggregates into one new group.  Empty selection shakes
   * and sends nothing.
   */
  lassoAggregate(polygon: Array<[number, number]>): GestureResult {
    const nodesInside = plainNodes(this.scene).filter((n) =>
      pointInPolygon(polygon, n.x, n.y),
    );
    const matricesInside = matrices(this.scene).filter((m) =>
      pointInPolygon(polygon, m.cx, m.cy),
    );
    if (nodesInside.length === 0 && matricesInside.length === 0) {
      return { outcome: "shake" };
    }
    if (matricesInside.length === 0) {
      if (nodesInside.length < 2) return { outcome: "shake" };
      this.sink.send("aggregate", { groups: nodesInside.map((n) => n.group) });
      return { outcome: "commit" };
    }
    if (matricesInside.length === 1) {
      const target = matricesInside[0].group;
      for (const n of nodesInside) {
        this.sink.send("add", { "node-group": n.group, group: target });
      }
      return { outcome: "commit" };
    }
    const groups = [
      ...matricesInside.map((m) => m.group),
      ...nodesInside.map((n) => n.group),
    ];
    this.sink.send("aggregate", { groups });
    return { outcome: "commit" };
  }

  // -- split ---------------------------------------------------------------

  /** Right-click (or pen long-press) on a matrix splits it back to nodes. */
  rightClickSplit(x: number, y: number): GestureResult {
    const over = hitTest(this.scene, x, y);
    if (over.type === "matrix" || over.type === "axis-item") {
      this.sink.send("split", { group: over.matrix.group });
      return { outcome: "commit" };
    }
    return { outcome: "cancel" };
  }

  // -- dual-view drop ------------------------------------------------------

  /**
   * Drop of a selection made in the pure-matrix window.  Axis selections
   * carry the selected members; cell selections carry the union of the
   * selected edges' endpoint nodes.  Nodes already absorbed into a
   * multi-member group reject the drop (membership is many-to-one).
   */
  dualViewDrop(
    view: MatrixGlyph,
    selection: { ordinals?: number[]; cells?: Array<{ row: number; col: number }> },
    groupedNodes: ReadonlySet<number>,
  ): GestureResult {
    const picked = new Set<number>();
    for (const o of selection.ordinals ?? []) picked.add(view.members[o]);
    for (const c of selection.cells ?? []) {
      picked.add(view.members[c.row]);
      picked.add(view.members[c.col]);
    }
    if (picked.size === 0) return { outcome: "shake" };
    for (const n of picked) {
      if (groupedNodes.has(n)) return { outcome: "cancel" };
    }
    const ordinalOf = new Map(view.members.map((n, i) => [n, i]));
    const labels = [...picked]
      .sort((a, b) => ordinalOf.get(a)! - ordinalOf.get(b)!)
      .map((n) => view.member_labels[ordinalOf.get(n)!]);
    this.sink.send("aggregate", { nodes: labels });
    return { outcome: "commit" };
  }

  // -- hover labels --------------------------------------------------------

  private pinnedLabels = new Set<number>();

  /**
   * On-demand label mode: hovering a matrix reveals its axis labels and its
   * graph-neighbors'; revealed labels persist until dismissed.
   */
  hoverLabels(x: number, y: number): ReadonlySet<number> {
    const over = hitTest(this.scene, x, y);
    if (over.type === "matrix" || over.type === "axis-item") {
      const g = over.matrix.group;
      this.pinnedLabels.add(g);
      for (const path of edgePaths(this.scene)) {
        if (path.source_group === g) this.pinnedLabels.add(path.target_group);
        if (path.target_group === g) this.pinnedLabels.add(path.source_group);
      }
    }
    const matrixGroups = new Set(matrices(this.scene).map((m) => m.group));
    return new Set([...this.pinnedLabels].filter((g) => matrixGroups.has(g)));
  }

  dismissLabels(): void {
    this.pinnedLabels.clear();
  }
}

// -- sliders ---------------------------------------------------------------

export type SliderChannel =
  | "link-thickness"
  | "matrix-size"
  | "axis-label-size"
  | "animation-speed";

const STYLE_KEYS: Record<Exclude<SliderChannel, "animation-speed">, string> = {
  "link-thickness": "link_thickness",
  "matrix-size": "cell_size",
  "axis-label-size": "axis_label_size",
};

const FRAME_MS = 1000 / 60;

/**
 * Continuous sliders.  Style channels stream set-style commands throttled to
 * frame rate, with a guaranteed flush on release; the animation-speed channel
 * is UI-local (it sets the duration used for plan-animation requests).
 */
export class Sliders {
  animationDuration = 3.0; // novice preset; expert preset is 0.5

  private lastSent = new Map<SliderChannel, number>();
  private pendingValue = new Map<SliderChannel, number>();

  constructor(
    private sink: CommandSink,
    private now: () => number = () => Date.now(),
  ) {}

  drag(channel: SliderChannel, value: number): void {
    if (channel === "animation-speed") {
      this.animationDuration = value;
      return;
    }
    this.pendingValue.set(channel, value);
    const last = this.lastSent.get(channel);
    if (last !== undefined && this.now() - last < FRAME_MS) return;
    this.flush(channel);
  }

  release(channel: SliderChannel): void {
    if (channel === "animation-speed") return;
    if (this.pendingValue.has(channel)) this.flush(channel);
  }

  private flush(channel: Exclude<SliderChannel, "animation-speed">): void {
    const value = this.pendingValue.get(channel);
    if (value === undefined) return;
    this.pendingValue.delete(channel);
    this.lastSent.set(channel, this.now());
    this.sink.send("set-style", { style: { [STYLE_KEYS[channel]]: value } });
  }
}
