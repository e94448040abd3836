/**
 * Editor shell: wires the session client, gesture controller, sliders, and
 * renderer together.  Holds no authoritative state — everything displayed
 * derives from engine events, and a forced resync re-requests the scene and
 * re-renders identically.
 */

import { GestureController, Sliders } from "./gestures";
import { CommandSink, SessionClient, SessionEvent } from "./protocol";
import { renderScene } from "./renderer";
import { MatrixGlyph, Scene, matrices } from "./scene";

export class EditorApp {
  readonly gestures: GestureController;
  readonly sliders: Sliders;

  private scene: Scene = { items: [] };
  private markup = "";

  constructor(private client: SessionClient & CommandSink) {
    this.gestures = new GestureController(client, this.scene);
    this.sliders = new Sliders(client);
    client.onEvent((ev) => this.onEvent(ev));
  }

  get svg(): string {
    return this.markup;
  }

  get currentScene(): Scene {
    return this.scene;
  }

  /** Node ids currently absorbed into multi-member groups. */
  groupedNodes(): Set<number> {
    const grouped = new Set<number>();
    for (const m of matrices(this.scene)) {
      for (const n of m.members) grouped.add(n);
    }
    return grouped;
  }

  /** Re-request the full scene from the engine. */
  async resync(): Promise<void> {
    const ev = await this.client.request("request-scene", {});
    this.applyScene(ev.payload["scene"] as Scene);
  }

  /** Matrices currently on the canvas (for panels and debugging). */
  matrixGlyphs(): MatrixGlyph[] {
    return matrices(this.scene);
  }

  private onEvent(ev: SessionEvent): void {
    if (ev.event === "scene") {
      this.applyScene(ev.payload["scene"] as Scene);
    } else if (ev.event === "state-delta") {
      // membership or geometry changed; pull the fresh scene
      this.client.send("request-scene", {});
    }
  }

  private applyScene(scene: Scene): void {
    this.scene = scene;
    this.gestures.setScene(scene);
    this.markup = renderScene(scene, {
      labelGroups: this.gestures.hoverLabels(Number.NaN, Number.NaN),
    });
  }
}
