import { describe, expect, it } from "vitest";

import { EditorApp } from "../src/app";
import { LineTransport, SessionClient } from "../src/protocol";
import { Scene } from "../src/scene";
import { twoMatrixScene } from "./fixtures";

/** In-memory transport wired to a scripted fake engine. */
class FakeEngine implements LineTransport {
  readonly received: Array<{ cmd: string; id: number; args: unknown }> = [];
  private handler: ((line: string) => void) | null = null;

  constructor(private scene: Scene) {}

  writeLine(line: string): void {
    const message = JSON.parse(line);
    this.received.push(message);
    const reply = (event: string, payload: unknown) =>
      this.handler?.(
        JSON.stringify({ "reply-to": message.id, event, payload }),
      );
    if (message.cmd === "request-scene") {
      reply("scene", { scene: this.scene });
    } else if (message.cmd === "aggregate") {
      reply("state-delta", { group: 12 });
    } else {
      reply("error", { message: "unknown" });
    }
  }

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }
}

describe("session client", () => {
  it("assigns monotone ids and resolves replies by id", async () => {
    const engine = new FakeEngine(twoMatrixScene());
    const client = new SessionClient(engine);
    const first = await client.request("request-scene", {});
    const second = await client.request("frobnicate", {});
    expect(engine.received.map((m) => m.id)).toEqual([1, 2]);
    expect(first.event).toBe("scene");
    expect(second.event).toBe("error");
  });
});

describe("editor app", () => {
  it("derives everything displayed from engine events", async () => {
    const engine = new FakeEngine(twoMatrixScene());
    const app = new EditorApp(new SessionClient(engine));
    expect(app.svg).toBe("");
    await app.resync();
    expect(app.svg).toContain('class="matrix"');
    expect(app.matrixGlyphs().map((m) => m.group)).toEqual([10, 11]);
    expect(app.groupedNodes()).toEqual(new Set([0, 1, 2, 3, 4]));
  });

  it("a forced resync never changes what is displayed", async () => {
    const engine = new FakeEngine(twoMatrixScene());
    const app = new EditorApp(new SessionClient(engine));
    await app.resync();
    const before = app.svg;
    await app.resync();
    expect(app.svg).toBe(before);
  });

  it("state-delta events trigger a scene refresh", async () => {
    const engine = new FakeEngine(twoMatrixScene());
    const app = new EditorApp(new SessionClient(engine));
    await app.resync();
    engine.received.length = 0;
    app.gestures.lassoAggregate([
      [-1, -1],
      [3, -1],
      [3, 1],
      [-1, 1],
    ]);
    expect(engine.received.map((m) => m.cmd)).toEqual([
      "aggregate",
      "request-scene",
    ]);
  });
});
