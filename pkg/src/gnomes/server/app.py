"""HTTP and WebSocket surface of the game server.

Routes are thin: they resolve the session, translate request bodies, and
let :class:`~gnomes.server.session.Session` enforce every game rule.  The
WebSocket stream replays missed events from the client's last acknowledged
sequence number, then stays live.
"""

from __future__ import annotations

import asyncio
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect

from gnomes.core.mazefile import MazeFileError, loads_maze
from gnomes.core.mazegen import generate_setup
from gnomes.core.types import Direction, Player
from gnomes.language.llm import client_from_env
from gnomes.server.schemas import (
    ChatRequest,
    CreateSessionRequest,
    JoinSessionRequest,
    MoveRequest,
)
from gnomes.server.session import (
    ProtocolError,
    Session,
    SessionCondition,
    SessionSettings,
    SessionStore,
)

log = logging.getLogger(__name__)

ENV_PREFIX = "GNOMES_SERVER"


@dataclass
class ServerConfig:
    """Process-level knobs; per-session ones ride in the create request."""

    log_dir: Path | None = None
    turn_cap: int = 200
    planner_iterations: int = 100
    maze_width: int = 9
    maze_height: int = 9
    rounds: int = 5

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "ServerConfig":
        env = dict(os.environ if env is None else env)
        config = cls()
        path = env.get(f"{ENV_PREFIX}_CONFIG")
        if path:
            config = cls(**_load_config_file(Path(path)))
        raw_dir = env.get(f"{ENV_PREFIX}_LOG_DIR")
        if raw_dir:
            config.log_dir = Path(raw_dir)
        for name in ("turn_cap", "planner_iterations", "maze_width", "maze_height", "rounds"):
            raw = env.get(f"{ENV_PREFIX}_{name.upper()}")
            if raw:
                setattr(config, name, int(raw))
        return config


def _load_config_file(path: Path) -> dict:
    data = json.loads(path.read_text(encoding="utf-8"))
    known = set(ServerConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "log_dir" in data and data["log_dir"] is not None:
        data["log_dir"] = Path(data["log_dir"])
    return data


def create_app(config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig.from_env()
    store = SessionStore()
    llm = client_from_env()
    app = FastAPI(title="gnomes server")
    app.state.config = config
    app.state.store = store

    def _session(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except ProtocolError as exc:
            raise HTTPException(exc.status, exc.detail) from None

    @app.exception_handler(ProtocolError)
    async def _protocol_error(_request, exc: ProtocolError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=exc.status, content={"detail": exc.detail})

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(body: CreateSessionRequest) -> dict:
        if body.maze_file is not None:
            try:
                setup = loads_maze(body.maze_file)
            except MazeFileError as exc:
                raise HTTPException(400, f"bad maze file: {exc}") from None
        else:
            seed = body.maze_seed if body.maze_seed is not None else SessionStore.new_seed()
            setup = generate_setup(
                seed, config.maze_width, config.maze_height, rounds=config.rounds
            )
        settings = SessionSettings(
            turn_cap=body.turn_cap or config.turn_cap,
            planner_iterations=body.planner_iterations or config.planner_iterations,
        )
        session = Session(
            SessionStore.new_id(),
            SessionCondition(body.condition),
            setup,
            settings,
            rng_seed=body.maze_seed,
            llm=llm,
            log_dir=config.log_dir,
        )
        store.add(session)
        client_id = session.add_creator()
        join_path = (
            f"/sessions/{session.id}/join?token={session.join_token}"
            if session.join_token
            else None
        )
        return {
            "v": 1,
            "session_id": session.id,
            "client_id": client_id,
            "seat": Player.H.value,
            "condition": session.condition.value,
            "width": setup.width,
            "height": setup.height,
            "round_count": len(setup.treasures),
            "join_path": join_path,
        }

    @app.post("/sessions/{session_id}/join")
    async def join_session(session_id: str, body: JoinSessionRequest) -> dict:
        session = _session(session_id)
        client_id = session.add_joiner(body.token)
        return {
            "v": 1,
            "session_id": session.id,
            "client_id": client_id,
            "seat": Player.E.value,
            "condition": session.condition.value,
            "width": session.setup.width,
            "height": session.setup.height,
            "round_count": len(session.setup.treasures),
            "join_path": None,
        }

    @app.get("/sessions/{session_id}/state")
    async def get_state(session_id: str, client_id: str = Query(...)) -> dict:
        session = _session(session_id)
        seat = session.seat_of(client_id)
        return {
            "v": 1,
            "seq": session.last_seq,
            "state": session.state_payload(seat),
        }

    @app.get("/sessions/{session_id}/events")
    async def get_events(
        session_id: str, client_id: str = Query(...), after: int = Query(0, ge=0)
    ) -> dict:
        session = _session(session_id)
        seat = session.seat_of(client_id)
        return {"v": 1, "events": session.events_after(seat, after)}

    @app.post("/sessions/{session_id}/move")
    async def post_move(session_id: str, body: MoveRequest) -> dict:
        session = _session(session_id)
        return await session.submit_move(body.client_id, Direction.from_word(body.direction))

    @app.post("/sessions/{session_id}/chat")
    async def post_chat(session_id: str, body: ChatRequest) -> dict:
        session = _session(session_id)
        return await session.submit_chat(body.client_id, body.text)

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str) -> None:
        await websocket.accept()
        client_id = websocket.query_params.get("client_id", "")
        after = int(websocket.query_params.get("after", "0"))
        try:
            session = store.get(session_id)
            seat = session.seat_of(client_id)
        except ProtocolError as exc:
            await websocket.close(code=4000 + exc.status, reason=exc.detail)
            return
        queue, backlog = session.subscribe(seat, after)
        try:
            for envelope in backlog:
                await websocket.send_json(envelope)
            receiver = asyncio.create_task(websocket.receive())
            try:
                while True:
                    getter = asyncio.create_task(queue.get())
                    done, _ = await asyncio.wait(
                        {getter, receiver}, return_when=asyncio.FIRST_COMPLETED
                    )
                    if receiver in done:
                        # inbound traffic only ever signals disconnect
                        getter.cancel()
                        break
                    await websocket.send_json(getter.result())
            finally:
                receiver.cancel()
        except WebSocketDisconnect:
            pass
        finally:
            session.unsubscribe(queue)

    return app
