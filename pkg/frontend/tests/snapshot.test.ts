// Deterministic replay rendering: transcripts recorded from the real
// server fold into scenes that must not drift between runs.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import type { WireEnvelope } from "../src/protocol.js";
import { render } from "../src/scene.js";
import { initialView, reduce } from "../src/view.js";

function transcript(name: string): WireEnvelope[] {
  const raw = readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");
  return JSON.parse(raw) as WireEnvelope[];
}

function scenesOf(events: WireEnvelope[]) {
  let view = initialView();
  const scenes = [];
  for (const event of events) {
    view = reduce(view, event);
    scenes.push(render(view));
  }
  return scenes;
}

describe("replay rendering", () => {
  it("renders the talking-agent transcript to stable scenes", () => {
    expect(scenesOf(transcript("transcript_comm.json"))).toMatchSnapshot();
  });

  it("renders the mute transcript to stable scenes", () => {
    expect(scenesOf(transcript("transcript_mute.json"))).toMatchSnapshot();
  });

  it("renders the wall-bounce transcript to stable scenes", () => {
    expect(scenesOf(transcript("transcript_bounce.json"))).toMatchSnapshot();
  });

  it("replays to identical scenes every time", () => {
    const events = transcript("transcript_comm.json");
    expect(scenesOf(events)).toEqual(scenesOf(events));
  });

  it("shows the chatbox while talking and drops it entirely when mute", () => {
    const talking = scenesOf(transcript("transcript_comm.json"));
    expect(talking.at(-1)?.chatbox).not.toBeNull();
    expect(talking.at(-1)?.hints).not.toBeNull();

    const mute = scenesOf(transcript("transcript_mute.json"));
    for (const scene of mute) {
      expect(scene.chatbox).toBeNull();
      expect(scene.hints).toBeNull();
    }
  });

  it("carries the server's rejection text verbatim and shakes once per bounce", () => {
    const scenes = scenesOf(transcript("transcript_bounce.json"));
    const bounced = scenes.find((scene) => scene.rejectionText !== null);
    expect(bounced?.rejectionText).toBe(
      "I cannot up because there is a wall in that direction.",
    );
    expect(bounced?.shakeNonce).toBe(1);
    expect(scenes.at(-1)?.shakeNonce).toBe(1);
  });

  it("disables move buttons whenever it is not this seat's turn", () => {
    const events = transcript("transcript_comm.json");
    let view = initialView();
    for (const event of events) {
      view = reduce(view, event);
      expect(render(view).moveButtonsEnabled).toBe(view.myTurn);
    }
  });
});
