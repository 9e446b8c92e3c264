// Server access: thin fetch wrappers for the HTTP API plus an event
// stream that prefers WebSocket and falls back to long-ish polling.
// Both paths resume from the last applied sequence number, so a
// reconnect replays exactly the missed events.

import type {
  Condition,
  DirectionWord,
  MoveResponse,
  SessionHandle,
  WireEnvelope,
} from "./protocol.js";

export interface CreateOptions {
  condition: Condition;
  mazeSeed?: number;
  mazeFile?: string;
  turnCap?: number;
  plannerIterations?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, (body as { detail?: string }).detail ?? response.statusText);
  }
  return body as T;
}

function post<T>(url: string, payload: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export class GameApi {
  constructor(readonly baseUrl: string) {}

  createSession(options: CreateOptions): Promise<SessionHandle> {
    return post(`${this.baseUrl}/sessions`, {
      condition: options.condition,
      maze_seed: options.mazeSeed ?? null,
      maze_file: options.mazeFile ?? null,
      turn_cap: options.turnCap ?? null,
      planner_iterations: options.plannerIterations ?? null,
    });
  }

  joinSession(sessionId: string, token: string | null): Promise<SessionHandle> {
    return post(`${this.baseUrl}/sessions/${sessionId}/join`, { token });
  }

  submitMove(sessionId: string, clientId: string, direction: DirectionWord): Promise<MoveResponse> {
    return post(`${this.baseUrl}/sessions/${sessionId}/move`, {
      client_id: clientId,
      direction,
    });
  }

  submitChat(sessionId: string, clientId: string, text: string): Promise<{ delivered: true }> {
    return post(`${this.baseUrl}/sessions/${sessionId}/chat`, {
      client_id: clientId,
      text,
    });
  }

  async fetchEvents(sessionId: string, clientId: string, after: number): Promise<WireEnvelope[]> {
    const url =
      `${this.baseUrl}/sessions/${sessionId}/events` +
      `?client_id=${encodeURIComponent(clientId)}&after=${after}`;
    const body = await request<{ events: WireEnvelope[] }>(url);
    return body.events;
  }
}

export interface StreamCallbacks {
  onEvent: (event: WireEnvelope) => void;
  onStatus?: (connected: boolean) => void;
  /** The reducer's cursor; reconnects replay everything after it. */
  lastSeq: () => number;
}

const BACKOFF_START_MS = 500;
const BACKOFF_MAX_MS = 10_000;
const POLL_INTERVAL_MS = 400;

export class EventStream {
  private socket: WebSocket | null = null;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private backoffMs = BACKOFF_START_MS;
  private stopped = false;

  constructor(
    private readonly api: GameApi,
    private readonly sessionId: string,
    private readonly clientId: string,
    private readonly callbacks: StreamCallbacks,
    private readonly transport: "websocket" | "poll" = "websocket",
  ) {}

  start(): void {
    this.stopped = false;
    if (this.transport === "websocket" && typeof WebSocket !== "undefined") {
      this.openSocket();
    } else {
      this.schedulePoll(0);
    }
  }

  stop(): void {
    this.stopped = true;
    if (this.socket) {
      this.socket.close();
      this.socket = null;
    }
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
  }

  private wsUrl(): string {
    const after = this.callbacks.lastSeq();
    const base = this.api.baseUrl.replace(/^http/, "ws");
    return (
      `${base}/sessions/${this.sessionId}/stream` +
      `?client_id=${encodeURIComponent(this.clientId)}&after=${after}`
    );
  }

  private openSocket(): void {
    if (this.stopped) return;
    const socket = new WebSocket(this.wsUrl());
    this.socket = socket;
    socket.onopen = () => {
      this.backoffMs = BACKOFF_START_MS;
      this.callbacks.onStatus?.(true);
    };
    socket.onmessage = (message: MessageEvent<string>) => {
      this.deliver(JSON.parse(message.data) as WireEnvelope);
    };
    socket.onclose = () => {
      this.callbacks.onStatus?.(false);
      if (this.stopped) return;
      // reconnect resumes from lastSeq, so nothing is lost in the gap
      setTimeout(() => this.openSocket(), this.backoffMs);
      this.backoffMs = Math.min(this.backoffMs * 2, BACKOFF_MAX_MS);
    };
  }

  private schedulePoll(delayMs: number): void {
    if (this.stopped) return;
    this.pollTimer = setTimeout(() => void this.pollOnce(), delayMs);
  }

  private async pollOnce(): Promise<void> {
    try {
      const events = await this.api.fetchEvents(
        this.sessionId,
        this.clientId,
        this.callbacks.lastSeq(),
      );
      this.callbacks.onStatus?.(true);
      for (const event of events) this.deliver(event);
      this.schedulePoll(POLL_INTERVAL_MS);
    } catch {
      this.callbacks.onStatus?.(false);
      this.schedulePoll(this.backoffMs);
      this.backoffMs = Math.min(this.backoffMs * 2, BACKOFF_MAX_MS);
    }
  }

  private deliver(event: WireEnvelope): void {
    if (event.seq <= this.callbacks.lastSeq()) return; // replayed duplicate
    this.callbacks.onEvent(event);
  }
}
