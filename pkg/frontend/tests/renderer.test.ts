import { describe, expect, it } from "vitest";

import { Playback, renderScene } from "../src/renderer";
import { twoMatrixScene } from "./fixtures";

describe("scene rendering", () => {
  it("is pure: the same scene renders to identical markup", () => {
    const scene = twoMatrixScene();
    expect(renderScene(scene)).toBe(renderScene(scene));
  });

  it("a resync from identical engine state changes nothing displayed", () => {
    // two structurally equal scenes, as a full-state resync would deliver
    expect(renderScene(twoMatrixScene())).toBe(renderScene(twoMatrixScene()));
  });

  it("draws edges under glyphs under labels", () => {
    const scene = twoMatrixScene();
    scene.items.push({
      kind: "label",
      text: "G",
      x: 10,
      y: 6,
      size: 2,
      anchor: "middle",
    });
    const svg = renderScene(scene);
    const edge = svg.indexOf('class="aggregated"');
    const glyph = svg.indexOf('class="matrix"');
    const label = svg.indexOf('class="label"');
    expect(edge).toBeGreaterThan(-1);
    expect(glyph).toBeGreaterThan(edge);
    expect(label).toBeGreaterThan(glyph);
  });

  it("hides axis labels unless global or revealed per group", () => {
    const scene = twoMatrixScene();
    const hidden = renderScene(scene, { globalLabels: false });
    expect(hidden).not.toContain('class="axis-label"');
    const revealed = renderScene(scene, {
      globalLabels: false,
      labelGroups: new Set([10]),
    });
    expect(revealed).toContain(">a</text>");
    expect(revealed).not.toContain(">d</text>");
  });

  it("escapes markup-significant characters in labels", () => {
    const scene = twoMatrixScene();
    scene.items.push({
      kind: "label",
      text: "<&>",
      x: 0,
      y: 0,
      size: 1,
      anchor: "start",
    });
    expect(renderScene(scene)).toContain("&lt;&amp;&gt;");
  });
});

describe("animation playback", () => {
  const frames = [0, 0.25, 0.5, 0.75, 1].map((t) => ({ t }));

  it("shows engine-sampled frames verbatim, no interpolation", () => {
    const playback = new Playback(frames);
    expect(playback.frameAt(0)).toBe(frames[0]);
    expect(playback.frameAt(1)).toBe(frames[4]);
    expect(playback.frameAt(0.3)).toBe(frames[1]); // nearest engine frame
  });

  it("rejects playhead positions outside [0, 1]", () => {
    const playback = new Playback(frames);
    expect(() => playback.frameAt(1.5)).toThrow();
    expect(() => playback.frameAt(-0.1)).toThrow();
  });

  it("needs at least two frames", () => {
    expect(() => new Playback([{ t: 0 }])).toThrow();
  });
});
