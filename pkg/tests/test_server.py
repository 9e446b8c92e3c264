"""Server behavior through the public HTTP/WS surface.

Every test drives the app with a real client; recorded traffic is checked
against the published JSON Schemas and the information-hiding rules.  The
corridor board is authored here so tests know both wall sets and can play
either seat perfectly.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from gnomes.core.episode import EpisodeLog
from gnomes.core.mazefile import dumps_maze, loads_maze
from gnomes.core.mazegen import generate_setup
from gnomes.server import ServerConfig, create_app

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"
WIRE_SCHEMA = json.loads((SCHEMA_DIR / "wire_events.schema.json").read_text())
ENVELOPE = jsonschema.Draft202012Validator(WIRE_SCHEMA)

# 5x1 open corridor, both sides identical, two rounds chained end to end.
CORRIDOR = (
    "gnomes-maze v1 5 1\n"
    "eaaab\n"
    "eaaab\n"
    "start 0 0\n"
    "treasure 1 4 0 H\n"
    "treasure 2 0 0 E\n"
)

# 2x1 board: the only move off the start is right, so round one ends on the
# first correct step and every wall probe is predictable.
TINY = (
    "gnomes-maze v1 2 1\n"
    "eb\n"
    "eb\n"
    "start 0 0\n"
    "treasure 1 1 0 H\n"
)


@pytest.fixture
def client(tmp_path):
    app = create_app(ServerConfig(log_dir=tmp_path / "logs"))
    with TestClient(app) as tc:
        tc.log_dir = tmp_path / "logs"
        yield tc


def create(client, condition="vs-agent-comm", *, maze_file=None, maze_seed=None, **extra):
    body = {"condition": condition, **extra}
    if maze_file is not None:
        body["maze_file"] = maze_file
    if maze_seed is not None:
        body["maze_seed"] = maze_seed
    response = client.post("/sessions", json=body)
    assert response.status_code == 201, response.text
    return response.json()


def events_of(client, sid, cid, after=0):
    response = client.get(f"/sessions/{sid}/events", params={"client_id": cid, "after": after})
    assert response.status_code == 200
    return response.json()["events"]


def state_of(client, sid, cid):
    response = client.get(f"/sessions/{sid}/state", params={"client_id": cid})
    assert response.status_code == 200
    return response.json()["state"]


def move(client, sid, cid, direction):
    return client.post(f"/sessions/{sid}/move", json={"client_id": cid, "direction": direction})


def wait_for_turn(client, sid, cid, *, tries=400):
    """Poll until the human controls a live game again (or it ended)."""
    for _ in range(tries):
        state = state_of(client, sid, cid)
        if state["game_over"] or state["in_control"] == "H":
            return state
    raise AssertionError("agent never returned control")


def play_out(client, sid, cid, *, against):
    """Drive seat H greedily on a known board until the game ends.

    ``against`` is the maze text; H walks straight toward the treasure when
    it can see it and stalls on noop otherwise.
    """
    setup = loads_maze(against)
    state = wait_for_turn(client, sid, cid)
    while not state["game_over"]:
        if state["treasure_visible"]:
            tx, ty = state["treasure"]
            x, y = state["token"]
            if tx > x:
                direction = "right"
            elif tx < x:
                direction = "left"
            elif ty > y:
                direction = "down"
            elif ty < y:
                direction = "up"
            else:
                direction = "noop"
        else:
            direction = "noop"
        response = move(client, sid, cid, direction)
        assert response.status_code == 200, response.text
        assert response.json()["result"] == "applied"
        state = wait_for_turn(client, sid, cid)
    return setup


class TestSessionLifecycle:
    def test_create_reports_board_shape(self, client):
        body = create(client, maze_seed=7)
        assert body["seat"] == "H"
        assert (body["width"], body["height"]) == (9, 9)
        assert body["round_count"] == 5
        assert body["join_path"] is None

    def test_health(self, client):
        assert client.get("/health").json() == {"status": "ok"}

    def test_unknown_session_and_client(self, client):
        assert client.get("/sessions/nope/state", params={"client_id": "x"}).status_code == 404
        body = create(client, maze_file=TINY)
        bad = client.get(f"/sessions/{body['session_id']}/state", params={"client_id": "x"})
        assert bad.status_code == 403

    def test_bad_maze_file_is_rejected_with_line(self, client):
        broken = CORRIDOR.replace("eaaab\neaaab", "eaaab\neaaaa", 1)
        response = client.post(
            "/sessions", json={"condition": "vs-agent-mute", "maze_file": broken}
        )
        assert response.status_code == 400
        assert "line 3" in response.json()["detail"]

    def test_seeded_board_is_reproducible(self, client):
        body = create(client, maze_seed=7)
        state = state_of(client, body["session_id"], body["client_id"])
        expected = generate_setup(7, 9, 9)
        assert state["walls"] == expected.side_h.to_bitmask_rows()

    def test_game_over_blocks_further_moves(self, client):
        body = create(client, maze_file=TINY, planner_iterations=10)
        sid, cid = body["session_id"], body["client_id"]
        response = move(client, sid, cid, "right")
        assert response.json() == {"v": 1, "result": "applied", "reward": 1.0}
        assert state_of(client, sid, cid)["game_over"] is True
        assert move(client, sid, cid, "right").status_code == 409
        assert client.post(
            f"/sessions/{sid}/chat", json={"client_id": cid, "text": "hello"}
        ).status_code == 409


class TestSeatsAndTurns:
    def test_vs_human_join_and_turn_order(self, client):
        body = create(client, "vs-human", maze_file=CORRIDOR)
        sid, h_id = body["session_id"], body["client_id"]
        assert body["join_path"].startswith(f"/sessions/{sid}/join?token=")
        token = body["join_path"].split("token=")[1]

        assert client.post(f"/sessions/{sid}/join", json={"token": "wrong"}).status_code == 403
        joined = client.post(f"/sessions/{sid}/join", json={"token": token})
        assert joined.status_code == 200
        e_id = joined.json()["client_id"]
        assert joined.json()["seat"] == "E"
        assert client.post(f"/sessions/{sid}/join", json={"token": token}).status_code == 409

        # H moves first; E out of turn is refused, then gets its turn
        assert move(client, sid, e_id, "right").status_code == 409
        assert move(client, sid, h_id, "right").status_code == 200
        assert move(client, sid, h_id, "right").status_code == 409
        assert move(client, sid, e_id, "right").status_code == 200

    def test_vs_agent_second_seat_is_closed(self, client):
        body = create(client, maze_file=TINY)
        response = client.post(f"/sessions/{body['session_id']}/join", json={"token": None})
        assert response.status_code == 409


class TestWallRejection:
    def test_blocked_move_keeps_turn_and_charges_penalty(self, client):
        body = create(client, "vs-human", maze_file=TINY)
        sid, cid = body["session_id"], body["client_id"]
        before = state_of(client, sid, cid)
        response = move(client, sid, cid, "up")
        assert response.status_code == 200
        assert response.json() == {"v": 1, "result": "rejected-wall", "reward": -0.06}

        after = state_of(client, sid, cid)
        assert after["token"] == before["token"]
        assert after["turn"] == before["turn"]
        assert after["in_control"] == "H"
        assert after["cumulative_reward"] == pytest.approx(-0.06)

        rejection = [e for e in events_of(client, sid, cid) if e["kind"] == "error"][-1]
        assert rejection["payload"]["code"] == "wall-rejected"
        assert rejection["payload"]["direction"] == "up"
        assert rejection["payload"]["text"] == (
            "I cannot up because there is a wall in that direction."
        )

    def test_partner_view_of_rejection_names_no_wall(self, client):
        body = create(client, "vs-human", maze_file=TINY)
        sid, h_id = body["session_id"], body["client_id"]
        token = body["join_path"].split("token=")[1]
        e_id = client.post(f"/sessions/{sid}/join", json={"token": token}).json()["client_id"]
        move(client, sid, h_id, "up")

        seen_by_e = [e for e in events_of(client, sid, e_id) if e["kind"] == "error"][-1]
        assert seen_by_e["payload"]["direction"] is None
        assert seen_by_e["payload"]["text"] is None
        assert seen_by_e["payload"]["penalty"] == pytest.approx(-0.06)


class TestInformationHiding:
    def test_all_traffic_validates_and_hides_partner_walls(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=20)
        sid, cid = body["session_id"], body["client_id"]
        setup = play_out(client, sid, cid, against=CORRIDOR)

        own_rows = setup.side_h.to_bitmask_rows()
        stream = events_of(client, sid, cid)
        assert [e["seq"] for e in stream] == list(range(1, len(stream) + 1))
        state_events = 0
        for envelope in stream:
            ENVELOPE.validate(envelope)
            if envelope["kind"] != "state":
                continue
            state_events += 1
            payload = envelope["payload"]
            assert payload["seat"] == "H"
            assert payload["walls"] == own_rows
            if payload["treasure_visible"]:
                assert payload["treasure"] is not None
            else:
                assert payload["treasure"] is None
        assert state_events >= 4

    def test_treasure_shown_only_on_owning_round(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=20)
        sid, cid = body["session_id"], body["client_id"]
        first = state_of(client, sid, cid)
        assert first["round_no"] == 1
        assert first["treasure_visible"] is True  # round one belongs to H
        assert first["treasure"] == [4, 0]

        play_out(client, sid, cid, against=CORRIDOR)
        rounds_seen = {}
        for envelope in events_of(client, sid, cid):
            if envelope["kind"] == "state" and not envelope["payload"]["game_over"]:
                payload = envelope["payload"]
                rounds_seen[payload["round_no"]] = payload["treasure_visible"]
        assert rounds_seen[1] is True
        assert rounds_seen[2] is False


class TestChat:
    def test_mute_session_has_no_chat(self, client):
        body = create(client, "vs-agent-mute", maze_file=CORRIDOR, planner_iterations=10)
        sid, cid = body["session_id"], body["client_id"]
        response = client.post(f"/sessions/{sid}/chat", json={"client_id": cid, "text": "hi"})
        assert response.status_code == 409

        move(client, sid, cid, "right")
        wait_for_turn(client, sid, cid)
        kinds = {e["kind"] for e in events_of(client, sid, cid)}
        assert "chat" not in kinds
        proposals = [e for e in events_of(client, sid, cid) if e["kind"] == "flag-proposal"]
        assert proposals, "agent thinking should still be signalled"
        assert all(e["payload"]["status"] == "thinking" for e in proposals)
        assert all(e["payload"]["flag"] is None for e in proposals)

    def test_comm_agent_proposes_and_speaks_in_template(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=20)
        sid, cid = body["session_id"], body["client_id"]
        move(client, sid, cid, "right")
        wait_for_turn(client, sid, cid)

        stream = events_of(client, sid, cid)
        proposed = [
            e["payload"] for e in stream
            if e["kind"] == "flag-proposal" and e["payload"]["status"] == "proposed"
        ]
        assert proposed and proposed[-1]["flag"] is not None
        chats = [e["payload"] for e in stream if e["kind"] == "chat"]
        if proposed[-1]["flag"] not in ("None", "Accept"):
            assert chats and chats[-1]["from"] == "E"
            assert chats[-1]["text"].startswith(("Can you ", "I cannot ", "I am at "))

    def test_inquiry_is_answered_without_consuming_a_turn(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=20)
        sid, cid = body["session_id"], body["client_id"]
        before = state_of(client, sid, cid)
        response = client.post(
            f"/sessions/{sid}/chat",
            json={"client_id": cid, "text": "Where is the treasure hidden?"},
        )
        assert response.status_code == 200

        after = state_of(client, sid, cid)
        assert after["turn"] == before["turn"]
        assert after["token"] == before["token"]
        chats = [e["payload"] for e in events_of(client, sid, cid) if e["kind"] == "chat"]
        assert chats[-1]["from"] == "E"
        # round one treasure belongs to H, so the agent must not know it
        assert "cannot see the treasure" in chats[-1]["text"]

    def test_directive_chat_becomes_the_agents_next_flag_in(self, client, tmp_path):
        app = create_app(ServerConfig(log_dir=tmp_path / "flagdir"))
        with TestClient(app) as tc:
            body = create(tc, maze_file=CORRIDOR, planner_iterations=20)
            sid, cid = body["session_id"], body["client_id"]
            tc.post(f"/sessions/{sid}/chat", json={"client_id": cid, "text": "can you go right?"})
            session = app.state.store.get(sid)
            assert session._from_human_flag.value == "right"
            move(tc, sid, cid, "right")
            wait_for_turn(tc, sid, cid)
            assert session._from_human_flag.value == "None"
            agent_entries = [
                entry for entry in session.current_log.entries if entry.player.value == "E"
            ]
            assert agent_entries and agent_entries[-1].flag_in == "right"

    def test_overlong_chat_is_a_400(self, client):
        body = create(client, maze_file=CORRIDOR)
        sid, cid = body["session_id"], body["client_id"]
        response = client.post(
            f"/sessions/{sid}/chat", json={"client_id": cid, "text": "x" * 501}
        )
        assert response.status_code == 400

    def test_vs_human_chat_is_relayed_verbatim(self, client):
        body = create(client, "vs-human", maze_file=CORRIDOR)
        sid, h_id = body["session_id"], body["client_id"]
        token = body["join_path"].split("token=")[1]
        e_id = client.post(f"/sessions/{sid}/join", json={"token": token}).json()["client_id"]
        text = "take the long way around, trust me"
        client.post(f"/sessions/{sid}/chat", json={"client_id": h_id, "text": text})

        for viewer in (h_id, e_id):
            chats = [e["payload"] for e in events_of(client, sid, viewer) if e["kind"] == "chat"]
            assert chats == [{"v": 1, "from": "H", "text": text}]


class TestPersistenceAndReplay:
    def test_episode_logs_replay_bit_exact(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=20)
        sid, cid = body["session_id"], body["client_id"]
        play_out(client, sid, cid, against=CORRIDOR)

        lines = [
            json.loads(line)
            for line in (client.log_dir / sid / "episodes.jsonl").read_text().splitlines()
        ]
        meta, rounds = lines[0], lines[1:]
        assert meta["kind"] == "session-meta"
        setup = loads_maze(meta["maze"])
        assert meta["maze"] == dumps_maze(loads_maze(CORRIDOR))

        assert [r["round"] for r in rounds] == [1, 2]
        for raw in rounds:
            log = EpisodeLog.from_dict(raw)
            assert log.solved is True
            final = log.replay(setup.side_e, setup.side_h)
            assert final.token == setup.treasure_for(log.round_no).cell

    def test_round_over_events_chain_rounds(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=20)
        sid, cid = body["session_id"], body["client_id"]
        play_out(client, sid, cid, against=CORRIDOR)

        overs = [e["payload"] for e in events_of(client, sid, cid) if e["kind"] == "round-over"]
        assert [o["round_no"] for o in overs] == [1, 2]
        assert overs[0] == {
            "v": 1,
            "round_no": 1,
            "solved": True,
            "turns": overs[0]["turns"],
            "game_over": False,
            "next_round": 2,
        }
        assert overs[1]["game_over"] is True
        assert overs[1]["next_round"] is None

    def test_events_endpoint_replay_is_idempotent(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=10)
        sid, cid = body["session_id"], body["client_id"]
        move(client, sid, cid, "right")
        wait_for_turn(client, sid, cid)

        full = events_of(client, sid, cid)
        again = events_of(client, sid, cid)
        assert full == again
        cut = len(full) // 2
        tail = events_of(client, sid, cid, after=full[cut - 1]["seq"])
        assert tail == full[cut:]

    def test_websocket_replays_then_streams(self, client):
        body = create(client, maze_file=CORRIDOR, planner_iterations=10)
        sid, cid = body["session_id"], body["client_id"]
        move(client, sid, cid, "right")
        state = wait_for_turn(client, sid, cid)
        assert not state["game_over"]
        recorded = events_of(client, sid, cid)

        with client.websocket_connect(f"/sessions/{sid}/stream?client_id={cid}&after=0") as ws:
            replayed = [ws.receive_json() for _ in recorded]
            assert replayed == recorded
            move(client, sid, cid, "noop")
            live = ws.receive_json()
            assert live["seq"] == recorded[-1]["seq"] + 1
            assert live["kind"] == "state"
