/**
 * Wire types and client for the engine's newline-delimited JSON session
 * protocol.  One command object per line in, one event object per line out;
 * events for a command arrive before the next command is served.
 */

export interface Command {
  cmd: string;
  id: number;
  args: Record<string, unknown>;
}

export interface SessionEvent {
  "reply-to": number | null;
  event: string;
  payload: Record<string, unknown>;
}

/** Where completed gestures send their commands. */
export interface CommandSink {
  send(cmd: string, args: Record<string, unknown>): void;
}

/** Test double: records every command in order. */
export class RecordingSink implements CommandSink {
  readonly commands: Array<{ cmd: string; args: Record<string, unknown> }> = [];

  send(cmd: string, args: Record<string, unknown>): void {
    this.commands.push({ cmd, args });
  }
}

export interface LineTransport {
  writeLine(line: string): void;
  onLine(handler: (line: string) => void): void;
}

/**
 * Serializes commands onto a line transport and delivers events, in order,
 * to per-command handlers.  Ids are assigned monotonically; the engine
 * replies with `reply-to` echoing the id.
 */
export class SessionClient implements CommandSink {
  private nextId = 1;
  private pending = new Map<number, (ev: SessionEvent) => void>();
  private listeners: Array<(ev: SessionEvent) => void> = [];

  constructor(private transport: LineTransport) {
    transport.onLine((line) => this.dispatch(line));
  }

  send(cmd: string, args: Record<string, unknown>): void {
    void this.request(cmd, args);
  }

  request(cmd: string, args: Record<string, unknown>): Promise<SessionEvent> {
    const id = this.nextId++;
    const message: Command = { cmd, id, args };
    const promise = new Promise<SessionEvent>((resolve) => {
      this.pending.set(id, resolve);
    });
    this.transport.writeLine(JSON.stringify(message));
    return promise;
  }

  /** Subscribe to every event, in arrival order. */
  onEvent(handler: (ev: SessionEvent) => void): void {
    this.listeners.push(handler);
  }

  private dispatch(line: string): void {
    if (line.trim() === "") return;
    const ev = JSON.parse(line) as SessionEvent;
    for (const listener of this.listeners) listener(ev);
    const replyTo = ev["reply-to"];
    if (typeof replyTo === "number") {
      const resolve = this.pending.get(replyTo);
      if (resolve) {
        this.pending.delete(replyTo);
        resolve(ev);
      }
    }
  }
}
