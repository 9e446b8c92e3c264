// Session controller shared by the page and the scripted tests: owns
// the view model, folds stream events into it, and recovers from
// sequence gaps by replaying the missed range over HTTP.

import { EventStream, GameApi } from "./net.js";
import type { DirectionWord, SessionHandle, WireEnvelope } from "./protocol.js";
import { SequenceGapError, initialView, reduce, type ClientViewModel } from "./view.js";

export type ViewListener = (view: ClientViewModel) => void;

export class GameClient {
  view: ClientViewModel = initialView();
  private stream: EventStream | null = null;
  private listeners: ViewListener[] = [];
  private repairing = false;

  constructor(
    readonly api: GameApi,
    readonly handle: SessionHandle,
    private readonly transport: "websocket" | "poll" = "websocket",
  ) {}

  onChange(listener: ViewListener): void {
    this.listeners.push(listener);
  }

  connect(): void {
    this.stream = new EventStream(
      this.api,
      this.handle.session_id,
      this.handle.client_id,
      {
        onEvent: (event) => this.apply(event),
        onStatus: (connected) => {
          if (this.view.connected !== connected) {
            this.view = { ...this.view, connected };
            this.notify();
          }
        },
        lastSeq: () => this.view.lastSeq,
      },
      this.transport,
    );
    this.stream.start();
  }

  disconnect(): void {
    this.stream?.stop();
    this.stream = null;
  }

  apply(event: WireEnvelope): void {
    try {
      this.view = { ...reduce(this.view, event), connected: true };
      this.notify();
    } catch (error) {
      if (error instanceof SequenceGapError) {
        void this.repair();
        return;
      }
      throw error;
    }
  }

  /** Refetch everything after the cursor; duplicates are skipped by seq. */
  private async repair(): Promise<void> {
    if (this.repairing) return;
    this.repairing = true;
    try {
      const events = await this.api.fetchEvents(
        this.handle.session_id,
        this.handle.client_id,
        this.view.lastSeq,
      );
      for (const event of events) {
        if (event.seq === this.view.lastSeq + 1) {
          this.view = reduce(this.view, event);
        }
      }
      this.notify();
    } finally {
      this.repairing = false;
    }
  }

  async move(direction: DirectionWord): Promise<void> {
    await this.api.submitMove(this.handle.session_id, this.handle.client_id, direction);
  }

  async chat(text: string): Promise<void> {
    await this.api.submitChat(this.handle.session_id, this.handle.client_id, text);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.view);
  }
}
