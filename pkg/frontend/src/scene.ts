// Pure rendering: view model in, plain scene description out. The DOM
// layer applies a Scene mechanically, so everything the player can see
// is decided (and testable) here.

import { WALL_DOWN, WALL_LEFT, WALL_RIGHT, WALL_UP, wallMaskAt } from "./protocol.js";
import type { ClientViewModel } from "./view.js";

export interface CellScene {
  x: number;
  y: number;
  wallRight: boolean;
  wallUp: boolean;
  wallLeft: boolean;
  wallDown: boolean;
  token: boolean;
  treasure: boolean;
}

export interface Scene {
  status: string;
  grid: CellScene[][];
  moveButtonsEnabled: boolean;
  shakeNonce: number;
  rejectionText: string | null;
  chatbox: { transcript: { from: string; text: string }[] } | null;
  hints: string[] | null;
  banner: string | null;
  agentThinking: boolean;
  score: string;
}

// Phrasings the rule-based parser on the other end understands.
export const HINT_PHRASES = [
  "can you go up / down / left / right?",
  "ok (accepts the partner's proposal)",
  "I cannot, there is a wall in that direction.",
  "where is the treasure?",
  "can you stay put?",
];

export function render(view: ClientViewModel): Scene {
  const grid: CellScene[][] = [];
  for (let y = 0; y < view.height; y++) {
    const row: CellScene[] = [];
    for (let x = 0; x < view.width; x++) {
      const mask = wallMaskAt(view.walls, x, y);
      row.push({
        x,
        y,
        wallRight: (mask & WALL_RIGHT) !== 0,
        wallUp: (mask & WALL_UP) !== 0,
        wallLeft: (mask & WALL_LEFT) !== 0,
        wallDown: (mask & WALL_DOWN) !== 0,
        token: view.token !== null && view.token[0] === x && view.token[1] === y,
        treasure:
          view.treasure !== null && view.treasure[0] === x && view.treasure[1] === y,
      });
    }
    grid.push(row);
  }

  return {
    status: statusLine(view),
    grid,
    moveButtonsEnabled: view.myTurn && !view.gameOver,
    shakeNonce: view.lastRejection?.nonce ?? 0,
    rejectionText: view.lastRejection?.text ?? null,
    chatbox: view.chatboxVisible
      ? { transcript: view.chat.map((line) => ({ from: line.from, text: line.text })) }
      : null,
    hints: view.hintsVisible ? HINT_PHRASES : null,
    banner: bannerLine(view),
    agentThinking: view.agentThinking,
    score: view.cumulativeReward.toFixed(2),
  };
}

function statusLine(view: ClientViewModel): string {
  if (view.seat === null) return "Connecting...";
  if (view.gameOver) return "Game over.";
  const round = `Round ${view.roundNo}/${view.roundCount}`;
  const turn = view.myTurn ? "your turn" : "partner's turn";
  const goal = view.treasureVisible
    ? "you can see the treasure"
    : "your partner sees the treasure this round";
  return `${round}, turn ${view.turn}/${view.turnCap}: ${turn}; ${goal}.`;
}

function bannerLine(view: ClientViewModel): string | null {
  const banner = view.banner;
  if (banner === null) return null;
  if (banner.gameOver) {
    return banner.solved
      ? `Round ${banner.roundNo} solved in ${banner.turns} turns. That was the last one; thanks for playing!`
      : `Round ${banner.roundNo} hit the turn limit. That was the last one; thanks for playing!`;
  }
  return banner.solved
    ? `Round ${banner.roundNo} solved in ${banner.turns} turns. On to round ${banner.nextRound}.`
    : `Round ${banner.roundNo} hit the turn limit. On to round ${banner.nextRound}.`;
}
