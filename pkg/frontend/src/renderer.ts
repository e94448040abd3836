/**
 * Display-only SVG production from Scene JSON.  Pure: the same scene always
 * yields the same markup, so a forced full-state resync never changes what
 * is displayed.  Z-order mirrors the engine: edges, then glyphs, then
 * labels.  Animation playback shows engine-sampled keyframes verbatim; the
 * UI interpolates nothing.
 */

import {
  EdgePath,
  MatrixGlyph,
  NodeGlyph,
  Scene,
  SceneLabel,
  cellCenter,
  edgePaths,
  matrixLeft,
  matrixTop,
} from "./scene";

function fmt(x: number): string {
  const s = x.toFixed(4);
  return s.replace(/\.?0+$/, "") || "0";
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function edgeMarkup(e: EdgePath): string {
  const d = e.points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join(" ");
  return `<path class="${e.kind}" d="${d}" stroke="${e.color}" stroke-width="${fmt(e.width)}" fill="none"/>`;
}

function nodeMarkup(n: NodeGlyph): string {
  return `<circle class="node" cx="${fmt(n.x)}" cy="${fmt(n.y)}" r="${fmt(n.radius)}" fill="${n.fill}"/>`;
}

function matrixMarkup(m: MatrixGlyph, labelsVisible: boolean): string {
  const l = matrixLeft(m);
  const t = matrixTop(m);
  const parts: string[] = [
    `<g class="matrix" data-group="${m.group}">`,
    `<rect x="${fmt(l)}" y="${fmt(t)}" width="${fmt(m.side)}" height="${fmt(m.side)}" fill="#ffffff" stroke="#333333"/>`,
  ];
  for (const c of m.cells) {
    if (!c.filled) continue;
    const [cx, cy] = cellCenter(m, c.row, c.col);
    const half = m.cell_size / 2;
    parts.push(
      `<rect class="cell" x="${fmt(cx - half)}" y="${fmt(cy - half)}" width="${fmt(m.cell_size)}" height="${fmt(m.cell_size)}" fill="${c.fill}"/>`,
    );
  }
  if (labelsVisible && m.axis_labels) {
    m.member_labels.forEach((label, i) => {
      const y = t + (i + 0.5) * m.cell_size;
      parts.push(
        `<text class="axis-label" x="${fmt(l - m.cell_size * 0.2)}" y="${fmt(y)}" text-anchor="end">${esc(label)}</text>`,
      );
    });
  }
  parts.push("</g>");
  return parts.join("");
}

function labelMarkup(l: SceneLabel): string {
  return `<text class="label" x="${fmt(l.x)}" y="${fmt(l.y)}" font-size="${fmt(l.size)}" text-anchor="${l.anchor}">${esc(l.text)}</text>`;
}

export interface RenderOptions {
  /** Groups whose axis labels are revealed (on-demand label mode). */
  labelGroups?: ReadonlySet<number>;
  /** Global label visibility; when false only labelGroups show labels. */
  globalLabels?: boolean;
}

export function renderScene(scene: Scene, options: RenderOptions = {}): string {
  const global = options.globalLabels ?? true;
  const revealed = options.labelGroups ?? new Set<number>();
  const body: string[] = [];
  for (const e of edgePaths(scene)) body.push(edgeMarkup(e));
  for (const item of scene.items) {
    if (item.kind === "node") body.push(nodeMarkup(item));
    if (item.kind === "matrix") {
      body.push(matrixMarkup(item, global || revealed.has(item.group)));
    }
  }
  for (const item of scene.items) {
    if (item.kind === "label") body.push(labelMarkup(item));
  }
  return `<svg xmlns="http://www.w3.org/2000/svg">${body.join("")}</svg>`;
}

// -- animation playback ----------------------------------------------------

export interface KeyframePayload {
  t: number;
  scene?: Scene;
  [extra: string]: unknown;
}

/**
 * Holds the keyframes returned by a plan-animation command and exposes the
 * engine-sampled frame nearest to the playhead.
 */
export class Playback {
  constructor(private frames: KeyframePayload[]) {
    if (frames.length < 2) throw new Error("playback needs at least 2 frames");
  }

  get frameCount(): number {
    return this.frames.length;
  }

  /** The engine frame shown at playhead position t in [0, 1]. */
  frameAt(t: number): KeyframePayload {
    if (t < 0 || t > 1) throw new Error(`playhead out of range: ${t}`);
    const index = Math.round(t * (this.frames.length - 1));
    return this.frames[index];
  }
}
