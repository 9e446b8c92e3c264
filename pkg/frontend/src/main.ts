// Page wiring: landing form -> session -> instructions -> live board.

import { GameClient } from "./client.js";
import { GamePage } from "./dom.js";
import { renderInstructions } from "./instructions.js";
import { GameApi } from "./net.js";
import type { Condition, SessionHandle } from "./protocol.js";
import { render } from "./scene.js";

const app = document.querySelector<HTMLDivElement>("#app");
if (!app) throw new Error("missing #app container");

interface JoinTarget {
  sessionId: string;
  token: string | null;
}

function joinTargetFromHash(): JoinTarget | null {
  const match = /^#join=([^:]+)(?::(.+))?$/.exec(window.location.hash);
  if (!match || match[1] === undefined) return null;
  return { sessionId: match[1], token: match[2] ?? null };
}

function landing(root: HTMLElement): void {
  root.replaceChildren();
  const form = document.createElement("div");
  form.className = "landing";

  const title = document.createElement("h1");
  title.textContent = "Gnomes";

  const serverInput = document.createElement("input");
  serverInput.value = window.location.origin;
  serverInput.className = "server-url";

  const conditionSelect = document.createElement("select");
  for (const condition of ["vs-agent-comm", "vs-agent-mute", "vs-human"] as const) {
    const option = document.createElement("option");
    option.value = condition;
    option.textContent = condition;
    conditionSelect.appendChild(option);
  }

  const startButton = document.createElement("button");
  startButton.textContent = "New game";
  startButton.addEventListener("click", () => {
    const api = new GameApi(serverInput.value.replace(/\/$/, ""));
    void api
      .createSession({ condition: conditionSelect.value as Condition })
      .then((handle) => enterGame(root, api, handle))
      .catch((error) => alert(`could not create a session: ${error}`));
  });

  form.append(title, label("server", serverInput), label("mode", conditionSelect), startButton);

  const target = joinTargetFromHash();
  if (target) {
    const joinButton = document.createElement("button");
    joinButton.textContent = `Join game ${target.sessionId}`;
    joinButton.addEventListener("click", () => {
      const api = new GameApi(serverInput.value.replace(/\/$/, ""));
      void api
        .joinSession(target.sessionId, target.token)
        .then((handle) => enterGame(root, api, handle))
        .catch((error) => alert(`could not join: ${error}`));
    });
    form.appendChild(joinButton);
  }

  root.appendChild(form);
}

function label(text: string, control: HTMLElement): HTMLElement {
  const wrap = document.createElement("label");
  wrap.textContent = text;
  wrap.appendChild(control);
  return wrap;
}

function enterGame(root: HTMLElement, api: GameApi, handle: SessionHandle): void {
  renderInstructions(root, () => {
    const client = new GameClient(api, handle);
    const page = new GamePage(root, {
      move: (direction) => {
        // moves render only when the server answers with a state event
        if (client.view.myTurn) void client.move(direction).catch(() => undefined);
      },
      chat: (text) => {
        void client.chat(text).catch(() => undefined);
      },
    });
    if (handle.join_path && handle.condition === "vs-human") {
      const token = handle.join_path.split("token=")[1] ?? "";
      const link = `${window.location.origin}${window.location.pathname}#join=${handle.session_id}:${token}`;
      const share = document.createElement("div");
      share.className = "share-link";
      share.textContent = `Send your partner this link: ${link}`;
      root.prepend(share);
    }
    client.onChange((view) => page.apply(render(view)));
    client.connect();
  });
}

landing(app);
