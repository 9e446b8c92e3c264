#!/usr/bin/env python3
"""Record the wire-event fixtures used by the frontend test suite.

Plays short scripted games against the in-process server and saves seat
H's event stream verbatim, so the replay/snapshot tests exercise real
traffic rather than hand-written envelopes.  Re-run after any wire
format change, then refresh the snapshots:

    python3 frontend/scripts/record_fixtures.py
    cd frontend && rm -rf tests/__snapshots__ && npx vitest run

Requires the gnomes package (and its server extras) on the import path.
"""

from __future__ import annotations

import json
from collections import deque
from pathlib import Path

from fastapi.testclient import TestClient

from gnomes.server import ServerConfig, create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# 5x1 open corridor, both sides identical, two rounds chained end to end.
# Round one is visible to H, round two only to the agent, so one game
# captures both the asking and the following halves of the protocol.
CORRIDOR = (
    "gnomes-maze v1 5 1\n"
    "eaaab\n"
    "eaaab\n"
    "start 0 0\n"
    "treasure 1 4 0 H\n"
    "treasure 2 0 0 E\n"
)

# 2x1 board where up is walled off: one doomed probe, one winning step.
TINY = (
    "gnomes-maze v1 2 1\n"
    "eb\n"
    "eb\n"
    "start 0 0\n"
    "treasure 1 1 0 H\n"
)

BIT = {"right": 1, "up": 2, "left": 4, "down": 8}
STEP = {"right": (1, 0), "up": (0, -1), "left": (-1, 0), "down": (0, 1)}
REJECT_LINE = "I cannot, there is a wall in that direction."


def blocked(walls: list[str], x: int, y: int, direction: str) -> bool:
    return bool(int(walls[y][x], 16) & BIT[direction])


def shortest_path(walls: list[str], start, goal) -> list[str]:
    """Directions of the shortest own-side path, [] when already there."""
    width, height = len(walls[0]), len(walls)
    parent: dict[tuple[int, int], tuple[tuple[int, int], str] | None] = {tuple(start): None}
    queue = deque([tuple(start)])
    while queue:
        cell = queue.popleft()
        if cell == tuple(goal):
            break
        for direction, (dx, dy) in STEP.items():
            nxt = (cell[0] + dx, cell[1] + dy)
            if blocked(walls, cell[0], cell[1], direction):
                continue
            if not (0 <= nxt[0] < width and 0 <= nxt[1] < height) or nxt in parent:
                continue
            parent[nxt] = (cell, direction)
            queue.append(nxt)
    path: list[str] = []
    cursor = tuple(goal)
    while parent.get(cursor):
        cell, direction = parent[cursor]
        path.insert(0, direction)
        cursor = cell
    return path


class Recorder:
    def __init__(self, client: TestClient, condition: str, *, maze_file: str, seed: int,
                 iterations: int) -> None:
        body = {
            "condition": condition,
            "maze_file": maze_file,
            "maze_seed": seed,
            "planner_iterations": iterations,
        }
        created = client.post("/sessions", json=body)
        created.raise_for_status()
        self.client = client
        self.sid = created.json()["session_id"]
        self.cid = created.json()["client_id"]
        self.talking = condition == "vs-agent-comm"
        self.last_proposal: str | None = None
        self.cursor = 0

    def state(self) -> dict:
        response = self.client.get(
            f"/sessions/{self.sid}/state", params={"client_id": self.cid}
        )
        response.raise_for_status()
        return response.json()["state"]

    def pump(self) -> None:
        response = self.client.get(
            f"/sessions/{self.sid}/events",
            params={"client_id": self.cid, "after": self.cursor},
        )
        response.raise_for_status()
        for event in response.json()["events"]:
            self.cursor = event["seq"]
            if event["kind"] == "flag-proposal" and event["payload"]["status"] == "proposed":
                self.last_proposal = event["payload"]["flag"]
            if event["kind"] == "round-over":
                self.last_proposal = None

    def chat(self, text: str) -> None:
        response = self.client.post(
            f"/sessions/{self.sid}/chat", json={"client_id": self.cid, "text": text}
        )
        response.raise_for_status()

    def move(self, direction: str) -> str:
        response = self.client.post(
            f"/sessions/{self.sid}/move",
            json={"client_id": self.cid, "direction": direction},
        )
        response.raise_for_status()
        return response.json()["result"]

    def wait_for_turn(self, *, tries: int = 2000) -> dict:
        for _ in range(tries):
            state = self.state()
            if state["game_over"] or state["in_control"] == "H":
                return state
        raise RuntimeError("agent never returned control")

    def play(self) -> None:
        """Seat-H policy: walk and ask while seeing, follow while blind."""
        asked_where = False
        while True:
            state = self.wait_for_turn()
            self.pump()
            if state["game_over"]:
                return
            if self.talking and not asked_where:
                asked_where = True
                self.chat("where is the treasure?")
            token = state["token"]
            if state["treasure_visible"]:
                path = shortest_path(state["walls"], token, state["treasure"])
                if len(path) > 1 and self.talking:
                    self.chat(f"Can you go {path[1]}?")
                self.move(path[0] if path else "noop")
            elif self.talking and self.last_proposal in STEP:
                if blocked(state["walls"], token[0], token[1], self.last_proposal):
                    self.chat(REJECT_LINE)
                    self.move("noop")
                else:
                    self.move(self.last_proposal)
            else:
                self.move("noop")

    def transcript(self) -> list[dict]:
        response = self.client.get(
            f"/sessions/{self.sid}/events",
            params={"client_id": self.cid, "after": 0},
        )
        response.raise_for_status()
        return response.json()["events"]


def record(name: str, play) -> None:
    app = create_app(ServerConfig(log_dir=None))
    with TestClient(app) as client:
        transcript = play(client)
    out = FIXTURE_DIR / f"{name}.json"
    out.write_text(json.dumps(transcript, indent=1) + "\n")
    print(f"{out.relative_to(Path.cwd())}: {len(transcript)} events")


def comm(client: TestClient) -> list[dict]:
    recorder = Recorder(client, "vs-agent-comm", maze_file=CORRIDOR, seed=1, iterations=20)
    recorder.play()
    return recorder.transcript()


def mute(client: TestClient) -> list[dict]:
    recorder = Recorder(client, "vs-agent-mute", maze_file=CORRIDOR, seed=2, iterations=10)
    recorder.play()
    return recorder.transcript()


def bounce(client: TestClient) -> list[dict]:
    recorder = Recorder(client, "vs-agent-comm", maze_file=TINY, seed=3, iterations=10)
    assert recorder.move("up") == "rejected-wall"
    assert recorder.move("right") == "applied"
    return recorder.transcript()


def main() -> None:
    record("transcript_comm", comm)
    record("transcript_mute", mute)
    record("transcript_bounce", bounce)


if __name__ == "__main__":
    main()
