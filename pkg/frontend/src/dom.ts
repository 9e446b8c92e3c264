// Applies a Scene to the page. No game logic here: every visible
// decision was already made by render(); this file only mirrors the
// scene into elements and forwards raw input upward.

import type { Scene } from "./scene.js";
import type { DirectionWord } from "./protocol.js";

export interface InputHandlers {
  move: (direction: DirectionWord) => void;
  chat: (text: string) => void;
}

const MOVE_KEYS: Record<string, DirectionWord> = {
  ArrowRight: "right",
  ArrowUp: "up",
  ArrowLeft: "left",
  ArrowDown: "down",
  " ": "noop",
};

const BUTTONS: readonly DirectionWord[] = ["up", "left", "noop", "right", "down"];

export class GamePage {
  private readonly status: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly board: HTMLElement;
  private readonly controls: HTMLElement;
  private readonly chatSection: HTMLElement;
  private readonly chatLog: HTMLElement;
  private readonly chatInput: HTMLInputElement;
  private readonly hintsPanel: HTMLElement;
  private readonly scorebox: HTMLElement;
  private readonly rejection: HTMLElement;
  private readonly thinking: HTMLElement;
  private moveButtons: HTMLButtonElement[] = [];
  private lastShakeNonce = 0;
  private gridShape = "";

  constructor(
    root: HTMLElement,
    private readonly handlers: InputHandlers,
  ) {
    root.replaceChildren();
    this.status = el("div", "status");
    this.banner = el("div", "banner");
    this.scorebox = el("div", "score");
    this.board = el("div", "board");
    this.rejection = el("div", "rejection");
    this.thinking = el("div", "thinking");
    this.thinking.textContent = "partner is thinking…";
    this.controls = el("div", "controls");
    for (const direction of BUTTONS) {
      const button = el("button", `move-${direction}`) as HTMLButtonElement;
      button.textContent = direction === "noop" ? "stay" : direction;
      button.addEventListener("click", () => this.handlers.move(direction));
      this.controls.appendChild(button);
      this.moveButtons.push(button);
    }

    this.chatSection = el("div", "chat");
    this.chatLog = el("div", "chat-log");
    this.chatInput = el("input", "chat-input") as HTMLInputElement;
    this.chatInput.placeholder = "message your partner";
    this.chatInput.addEventListener("keydown", (event) => {
      if (event.key !== "Enter") return;
      const text = this.chatInput.value.trim();
      if (!text) return;
      this.chatInput.value = "";
      this.handlers.chat(text);
    });
    this.chatSection.append(this.chatLog, this.chatInput);

    this.hintsPanel = el("div", "hints");

    root.append(
      this.status,
      this.banner,
      this.scorebox,
      this.board,
      this.rejection,
      this.thinking,
      this.controls,
      this.chatSection,
      this.hintsPanel,
    );

    document.addEventListener("keydown", (event) => {
      if (document.activeElement === this.chatInput) return;
      const direction = MOVE_KEYS[event.key];
      if (direction === undefined) return;
      event.preventDefault();
      this.handlers.move(direction);
    });
  }

  apply(scene: Scene): void {
    this.status.textContent = scene.status;
    this.banner.textContent = scene.banner ?? "";
    this.banner.hidden = scene.banner === null;
    this.scorebox.textContent = `score ${scene.score}`;
    this.thinking.hidden = !scene.agentThinking;

    this.applyGrid(scene);

    for (const button of this.moveButtons) button.disabled = !scene.moveButtonsEnabled;

    this.rejection.textContent = scene.rejectionText ?? "";
    this.rejection.hidden = scene.rejectionText === null;
    if (scene.shakeNonce !== this.lastShakeNonce) {
      this.lastShakeNonce = scene.shakeNonce;
      this.board.classList.remove("shake");
      void this.board.offsetWidth; // restart the CSS animation
      this.board.classList.add("shake");
    }

    // the mute condition has no chat surface at all
    if (scene.chatbox === null) {
      this.chatSection.remove();
    } else {
      this.chatLog.replaceChildren(
        ...scene.chatbox.transcript.map((line) => {
          const entry = el("div", `chat-line from-${line.from}`);
          entry.textContent = `${line.from === "H" ? "you" : "partner"}: ${line.text}`;
          return entry;
        }),
      );
      this.chatLog.scrollTop = this.chatLog.scrollHeight;
    }

    if (scene.hints === null) {
      this.hintsPanel.hidden = true;
    } else {
      this.hintsPanel.hidden = false;
      this.hintsPanel.replaceChildren(
        el("div", "hints-title", "Things your partner understands:"),
        ...scene.hints.map((hint) => el("div", "hint", hint)),
      );
    }
  }

  private applyGrid(scene: Scene): void {
    const shape = `${scene.grid[0]?.length ?? 0}x${scene.grid.length}`;
    if (shape !== this.gridShape) {
      this.gridShape = shape;
      this.board.replaceChildren();
      this.board.style.setProperty("--cols", String(scene.grid[0]?.length ?? 0));
      for (const row of scene.grid) {
        for (const cell of row) {
          this.board.appendChild(el("div", "cell", "", `cell-${cell.x}-${cell.y}`));
        }
      }
    }
    for (const row of scene.grid) {
      for (const cell of row) {
        const node = this.board.querySelector<HTMLElement>(`#cell-${cell.x}-${cell.y}`);
        if (!node) continue;
        node.classList.toggle("wall-right", cell.wallRight);
        node.classList.toggle("wall-up", cell.wallUp);
        node.classList.toggle("wall-left", cell.wallLeft);
        node.classList.toggle("wall-down", cell.wallDown);
        node.classList.toggle("token", cell.token);
        node.classList.toggle("treasure", cell.treasure);
        node.textContent = cell.token ? "🧙" : cell.treasure ? "💎" : "";
      }
    }
  }
}

function el(tag: string, className: string, text = "", id = ""): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text) node.textContent = text;
  if (id) node.id = id;
  return node;
}
