// The client's single source of truth: a view model folded over wire
// events. Pure and synchronous so a recorded transcript replays to the
// exact same model, which is what the snapshot tests rely on.

import type {
  Cell,
  Condition,
  FlagValue,
  Seat,
  StatePayload,
  WireEnvelope,
} from "./protocol.js";

export interface ChatLine {
  from: Seat;
  text: string;
}

export interface Rejection {
  direction: string | null;
  text: string | null;
  penalty: number | null;
  /** Bumps on every rejection so the UI can replay the shake animation. */
  nonce: number;
}

export interface RoundBanner {
  roundNo: number;
  solved: boolean;
  turns: number;
  gameOver: boolean;
  nextRound: number | null;
}

export interface ClientViewModel {
  lastSeq: number;
  connected: boolean;
  seat: Seat | null;
  condition: Condition | null;
  roundNo: number;
  roundCount: number;
  turn: number;
  turnCap: number;
  width: number;
  height: number;
  /** Own-side wall rows, verbatim from the last state event. */
  walls: string[];
  token: Cell | null;
  treasure: Cell | null;
  treasureVisible: boolean;
  inControl: Seat | null;
  myTurn: boolean;
  cumulativeReward: number;
  gameOver: boolean;
  chat: ChatLine[];
  chatboxVisible: boolean;
  hintsVisible: boolean;
  agentThinking: boolean;
  lastProposal: FlagValue | null;
  lastRejection: Rejection | null;
  banner: RoundBanner | null;
}

export function initialView(): ClientViewModel {
  return {
    lastSeq: 0,
    connected: false,
    seat: null,
    condition: null,
    roundNo: 0,
    roundCount: 0,
    turn: 0,
    turnCap: 0,
    width: 0,
    height: 0,
    walls: [],
    token: null,
    treasure: null,
    treasureVisible: false,
    inControl: null,
    myTurn: false,
    cumulativeReward: 0,
    gameOver: false,
    chat: [],
    chatboxVisible: false,
    hintsVisible: false,
    agentThinking: false,
    lastProposal: null,
    lastRejection: null,
    banner: null,
  };
}

export class SequenceGapError extends Error {
  constructor(
    readonly expected: number,
    readonly received: number,
  ) {
    super(`event gap: expected seq ${expected}, received ${received}`);
  }
}

/**
 * Fold one event into the model. Throws SequenceGapError when an event
 * arrives out of order; the stream layer reacts by replaying from
 * `lastSeq` instead of applying it.
 */
export function reduce(view: ClientViewModel, event: WireEnvelope): ClientViewModel {
  if (event.seq !== view.lastSeq + 1) {
    throw new SequenceGapError(view.lastSeq + 1, event.seq);
  }
  const next = { ...view, lastSeq: event.seq };
  switch (event.kind) {
    case "state":
      return applyState(next, event.payload);
    case "chat":
      return {
        ...next,
        chat: [...next.chat, { from: event.payload.from, text: event.payload.text }],
      };
    case "flag-proposal":
      if (event.payload.status === "thinking") {
        return { ...next, agentThinking: true };
      }
      return { ...next, agentThinking: false, lastProposal: event.payload.flag };
    case "round-over":
      return {
        ...next,
        agentThinking: false,
        lastProposal: null,
        banner: {
          roundNo: event.payload.round_no,
          solved: event.payload.solved,
          turns: event.payload.turns,
          gameOver: event.payload.game_over,
          nextRound: event.payload.next_round,
        },
      };
    case "error":
      if (event.payload.code !== "wall-rejected") return next;
      return {
        ...next,
        lastRejection: {
          direction: event.payload.direction,
          text: event.payload.text,
          penalty: event.payload.penalty,
          nonce: (next.lastRejection?.nonce ?? 0) + 1,
        },
      };
  }
}

function applyState(view: ClientViewModel, state: StatePayload): ClientViewModel {
  // Copy known fields one by one: the model must never pick up payload
  // fields it does not understand, and the treasure only when the server
  // says this seat may see it.
  const visible = state.treasure_visible === true;
  return {
    ...view,
    seat: state.seat,
    condition: state.condition,
    roundNo: state.round_no,
    roundCount: state.round_count,
    turn: state.turn,
    turnCap: state.turn_cap,
    width: state.width,
    height: state.height,
    walls: [...state.walls],
    token: [state.token[0], state.token[1]],
    treasure: visible && state.treasure ? [state.treasure[0], state.treasure[1]] : null,
    treasureVisible: visible,
    inControl: state.in_control,
    myTurn: !state.game_over && state.in_control === state.seat,
    cumulativeReward: state.cumulative_reward,
    gameOver: state.game_over,
    agentThinking: view.agentThinking && !state.game_over,
    chatboxVisible: state.condition !== "vs-agent-mute",
    hintsVisible: state.condition === "vs-agent-comm",
  };
}

export function reduceAll(
  events: readonly WireEnvelope[],
  from: ClientViewModel = initialView(),
): ClientViewModel {
  return events.reduce((view, event) => reduce(view, event), from);
}
