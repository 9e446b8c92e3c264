// Wire types mirroring schemas/wire_events.schema.json and
// schemas/http_api.schema.json. The reducer copies fields from these
// shapes explicitly; nothing else in the client touches raw payloads.

export type Seat = "E" | "H";

export type Condition = "vs-agent-comm" | "vs-agent-mute" | "vs-human";

export type Cell = [number, number];

export type FlagValue =
  | "noop"
  | "right"
  | "up"
  | "left"
  | "down"
  | "Accept"
  | "Reject"
  | "Inquiry"
  | "None";

export type DirectionWord = "noop" | "right" | "up" | "left" | "down";

export interface StatePayload {
  v: 1;
  seat: Seat;
  condition: Condition;
  round_no: number;
  round_count: number;
  turn: number;
  turn_cap: number;
  token: Cell;
  in_control: Seat;
  width: number;
  height: number;
  /** Own-side wall rows only; one lowercase hex digit per cell. */
  walls: string[];
  treasure: Cell | null;
  treasure_visible: boolean;
  cumulative_reward: number;
  game_over: boolean;
}

export interface ChatPayload {
  v: 1;
  from: Seat;
  text: string;
}

export interface FlagProposalPayload {
  v: 1;
  status: "thinking" | "proposed";
  flag: FlagValue | null;
}

export interface RoundOverPayload {
  v: 1;
  round_no: number;
  solved: boolean;
  turns: number;
  game_over: boolean;
  next_round: number | null;
}

export interface ErrorPayload {
  v: 1;
  code: "wall-rejected" | "protocol";
  text: string | null;
  direction: DirectionWord | null;
  penalty: number | null;
}

export type WireEnvelope =
  | { seq: number; kind: "state"; payload: StatePayload }
  | { seq: number; kind: "chat"; payload: ChatPayload }
  | { seq: number; kind: "flag-proposal"; payload: FlagProposalPayload }
  | { seq: number; kind: "round-over"; payload: RoundOverPayload }
  | { seq: number; kind: "error"; payload: ErrorPayload };

export interface SessionHandle {
  v: 1;
  session_id: string;
  client_id: string;
  seat: Seat;
  condition: Condition;
  width: number;
  height: number;
  round_count: number;
  join_path: string | null;
}

export interface MoveResponse {
  v: 1;
  result: "applied" | "rejected-wall";
  reward: number;
}

// Wall bitmask bits, matching the board file format.
export const WALL_RIGHT = 1;
export const WALL_UP = 2;
export const WALL_LEFT = 4;
export const WALL_DOWN = 8;

export function wallMaskAt(walls: string[], x: number, y: number): number {
  const row = walls[y];
  if (row === undefined || x < 0 || x >= row.length) return 0;
  return parseInt(row.charAt(x), 16);
}
