"""One live game: seats, turn order, the agent seat, and the event stream.

A session owns all mutable game state and serializes every mutation behind
one asyncio lock: human requests (moves, chat) and the agent's background
turn all queue on it.  Events carry gap-free sequence numbers and are
rendered per seat, so a client only ever receives its own wall layout and,
when it is the seeing side this round, the treasure cell.  Blocked-move
events name the wall only to the seat that hit it; the partner sees just
the shared penalty.
"""

from __future__ import annotations

import asyncio
import json
import logging
import secrets
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from gnomes.core import engine
from gnomes.core.episode import EpisodeEntry, EpisodeLog
from gnomes.core.mazefile import dumps_maze
from gnomes.core.mazegen import MazeSetup
from gnomes.core.types import Direction, GameState, MoveOutcome, Player, RewardSpec
from gnomes.flags import Flag
from gnomes.language import parse_message
from gnomes.language.messages import GameInfoSnapshot, check_message_length
from gnomes.language.templates import render_flag, render_reject
from gnomes.planner import PlannerConfig, PlannerGame, PlannerMemory, plan

log = logging.getLogger(__name__)


class SessionCondition(Enum):
    VS_AGENT_COMM = "vs-agent-comm"
    VS_AGENT_MUTE = "vs-agent-mute"
    VS_HUMAN = "vs-human"

    @property
    def has_agent(self) -> bool:
        return self is not SessionCondition.VS_HUMAN

    @property
    def chat_allowed(self) -> bool:
        return self is not SessionCondition.VS_AGENT_MUTE

    @property
    def talking_agent(self) -> bool:
        return self is SessionCondition.VS_AGENT_COMM


class ProtocolError(Exception):
    """Request breaks a session rule; carries the HTTP status to answer."""

    def __init__(self, status: int, detail: str):
        self.status = status
        self.detail = detail
        super().__init__(detail)


@dataclass(frozen=True)
class CanonicalEvent:
    """One emitted event with its per-seat payload views."""

    seq: int
    kind: str
    views: dict[str, dict[str, Any]]

    def envelope_for(self, seat: Player) -> dict[str, Any]:
        return {"seq": self.seq, "kind": self.kind, "payload": self.views[seat.value]}


@dataclass
class SessionSettings:
    turn_cap: int = 200
    planner_iterations: int = 100
    rewards: RewardSpec = field(default_factory=RewardSpec)


class Session:
    """A single game shared by one or two clients and, usually, the agent."""

    def __init__(
        self,
        session_id: str,
        condition: SessionCondition,
        setup: MazeSetup,
        settings: SessionSettings | None = None,
        *,
        rng_seed: int | None = None,
        llm=None,
        log_dir: Path | None = None,
    ) -> None:
        self.id = session_id
        self.condition = condition
        self.setup = setup
        self.settings = settings or SessionSettings()
        self.llm = llm
        self.join_token = (
            secrets.token_urlsafe(8) if condition is SessionCondition.VS_HUMAN else None
        )

        self.lock = asyncio.Lock()
        self.clients: dict[str, Player] = {}
        self.events: list[CanonicalEvent] = []
        self._seq = 0
        self._subscribers: list[tuple[Player, asyncio.Queue]] = []

        self.memory = PlannerMemory(
            rng_seed=rng_seed if rng_seed is not None else secrets.randbits(32)
        )
        self.planner_config = PlannerConfig(iterations=self.settings.planner_iterations)
        self.cumulative_reward = 0.0
        self.game_over = False
        self.finished_logs: list[EpisodeLog] = []
        self.chat_history: list[dict[str, str]] = []
        self._agent_task: asyncio.Task | None = None
        self.last_agent_action = Direction.NOOP

        # communication state, reset each round
        self._to_human_flag = Flag.NONE
        self._to_human_text: str | None = None
        self._from_human_flag = Flag.NONE
        self._from_human_text: str | None = None

        self._events_path: Path | None = None
        self._episodes_path: Path | None = None
        if log_dir is not None:
            session_dir = log_dir / session_id
            session_dir.mkdir(parents=True, exist_ok=True)
            self._events_path = session_dir / "events.jsonl"
            self._episodes_path = session_dir / "episodes.jsonl"
            self._append_jsonl(
                self._episodes_path,
                {
                    "v": 1,
                    "kind": "session-meta",
                    "session_id": session_id,
                    "condition": condition.value,
                    "maze": dumps_maze(setup),
                },
            )

        self.state: GameState
        self.game: PlannerGame | None = None
        self.current_log: EpisodeLog
        self._start_round(1, setup.start)
        self._emit_state()

    # ----- seats and clients -------------------------------------------

    def add_creator(self) -> str:
        client_id = secrets.token_urlsafe(12)
        self.clients[client_id] = Player.H
        return client_id

    def add_joiner(self, token: str | None) -> str:
        if self.condition is not SessionCondition.VS_HUMAN:
            raise ProtocolError(409, "the agent holds the second seat in this session")
        if any(seat is Player.E for seat in self.clients.values()):
            raise ProtocolError(409, "both seats are already taken")
        if token != self.join_token:
            raise ProtocolError(403, "join token does not match")
        client_id = secrets.token_urlsafe(12)
        self.clients[client_id] = Player.E
        return client_id

    def seat_of(self, client_id: str) -> Player:
        try:
            return self.clients[client_id]
        except KeyError:
            raise ProtocolError(403, "unknown client for this session") from None

    # ----- round lifecycle ----------------------------------------------

    def _start_round(self, round_no: int, start) -> None:
        spot = self.setup.treasure_for(round_no)
        self.state = GameState(
            token=start,
            in_control=Player.H,
            turn=0,
            treasure=spot.cell,
            treasure_side=spot.side,
            round_no=round_no,
        )
        self.game = (
            PlannerGame.for_state(self.setup.side_e, self.state, self.settings.rewards)
            if self.condition.has_agent
            else None
        )
        self.current_log = EpisodeLog(round_no=round_no)
        self._to_human_flag = Flag.NONE
        self._to_human_text = None
        self._from_human_flag = Flag.NONE
        self._from_human_text = None

    def _finish_round(self, solved: bool) -> None:
        self.current_log.solved = solved
        self.finished_logs.append(self.current_log)
        if self._episodes_path is not None:
            self._append_jsonl(self._episodes_path, self.current_log.to_dict())
        last = self.current_log.round_no == len(self.setup.treasures)
        next_round = None if last else self.current_log.round_no + 1
        if last:
            self.game_over = True
        self._emit_shared(
            "round-over",
            {
                "v": 1,
                "round_no": self.current_log.round_no,
                "solved": solved,
                "turns": self.current_log.turns,
                "game_over": self.game_over,
                "next_round": next_round,
            },
        )
        if next_round is not None:
            # chain from wherever the token actually stands
            self._start_round(next_round, self.state.token)
            # a chained start may already sit on the new treasure
            if engine.is_final(self.state):
                self._finish_round(True)
                return
        self._emit_state()

    # ----- events ---------------------------------------------------------

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    @property
    def last_seq(self) -> int:
        return self._seq

    def _emit(self, kind: str, views: dict[str, dict[str, Any]]) -> None:
        event = CanonicalEvent(self._next_seq(), kind, views)
        self.events.append(event)
        if self._events_path is not None:
            self._append_jsonl(
                self._events_path, {"seq": event.seq, "kind": kind, "views": views}
            )
        for seat, queue in self._subscribers:
            queue.put_nowait(event.envelope_for(seat))

    def _emit_shared(self, kind: str, payload: dict[str, Any]) -> None:
        self._emit(kind, {Player.E.value: payload, Player.H.value: payload})

    def _emit_state(self) -> None:
        self._emit(
            "state",
            {seat.value: self.state_payload(seat) for seat in (Player.E, Player.H)},
        )

    def state_payload(self, seat: Player) -> dict[str, Any]:
        """The state as ``seat`` may see it: own walls, treasure only if theirs."""
        side = self.setup.side_for(seat)
        visible = self.state.treasure_side is seat
        return {
            "v": 1,
            "seat": seat.value,
            "condition": self.condition.value,
            "round_no": self.state.round_no,
            "round_count": len(self.setup.treasures),
            "turn": self.state.turn,
            "turn_cap": self.settings.turn_cap,
            "token": [self.state.token.x, self.state.token.y],
            "in_control": self.state.in_control.value,
            "width": side.width,
            "height": side.height,
            "walls": side.to_bitmask_rows(),
            "treasure": (
                [self.state.treasure.x, self.state.treasure.y] if visible else None
            ),
            "treasure_visible": visible,
            "cumulative_reward": round(self.cumulative_reward, 10),
            "game_over": self.game_over,
        }

    def events_after(self, seat: Player, after: int) -> list[dict[str, Any]]:
        return [e.envelope_for(seat) for e in self.events if e.seq > after]

    def subscribe(self, seat: Player, after: int) -> tuple[asyncio.Queue, list[dict]]:
        """Live queue plus the backlog the subscriber still has to replay."""
        queue: asyncio.Queue = asyncio.Queue()
        self._subscribers.append((seat, queue))
        return queue, self.events_after(seat, after)

    def unsubscribe(self, queue: asyncio.Queue) -> None:
        self._subscribers = [(s, q) for s, q in self._subscribers if q is not queue]

    # ----- operations ---------------------------------------------------

    async def submit_move(self, client_id: str, direction: Direction) -> dict[str, Any]:
        async with self.lock:
            seat = self.seat_of(client_id)
            if self.game_over:
                raise ProtocolError(409, "the game is over")
            if self.state.in_control is not seat:
                raise ProtocolError(409, "not this seat's turn")
            side = self.setup.side_for(seat)
            if direction is not Direction.NOOP and side.blocked(self.state.token, direction):
                penalty = round(
                    engine.reward(
                        self.settings.rewards, self.state, direction, MoveOutcome.BLOCKED
                    ),
                    10,
                )
                self.cumulative_reward += penalty
                self._emit(
                    "error",
                    {
                        seat.value: {
                            "v": 1,
                            "code": "wall-rejected",
                            "text": render_reject(direction),
                            "direction": direction.word,
                            "penalty": penalty,
                        },
                        seat.other.value: {
                            "v": 1,
                            "code": "wall-rejected",
                            "text": None,
                            "direction": None,
                            "penalty": penalty,
                        },
                    },
                )
                self._emit_state()
                return {"v": 1, "result": "rejected-wall", "reward": penalty}

            reward = self._apply_move(
                seat,
                direction,
                flag_in=self._to_human_flag if seat is Player.H else Flag.NONE,
                flag_out=self._from_human_flag if seat is Player.H else Flag.NONE,
                message_in=self._to_human_text if seat is Player.H else None,
                message_out=self._from_human_text if seat is Player.H else None,
            )
            if not self.game_over and self.condition.has_agent:
                if self.state.in_control is Player.E:
                    self._agent_task = asyncio.create_task(self.agent_turn())
            return {"v": 1, "result": "applied", "reward": reward}

    def _apply_move(
        self,
        seat: Player,
        direction: Direction,
        *,
        flag_in: Flag,
        flag_out: Flag,
        message_in: str | None,
        message_out: str | None,
    ) -> float:
        """Book and apply one legal move; ends the round when it resolves it."""
        landed = self.state.token.step(direction)
        outcome = (
            MoveOutcome.REACHED_GOAL
            if landed == self.state.treasure
            else MoveOutcome.MOVED
        )
        reward = engine.reward(self.settings.rewards, self.state, direction, outcome)
        self.current_log.append(
            EpisodeEntry(
                turn=self.state.turn,
                player=seat,
                state=self.state,
                action=direction,
                flag_in=flag_in.value,
                flag_out=flag_out.value,
                message_in=message_in,
                message_out=message_out,
                reward=reward,
            )
        )
        self.state = engine.apply(self.setup.side_for(seat), self.state, direction)
        self.cumulative_reward += reward
        if engine.is_final(self.state):
            self._finish_round(True)
        elif self.state.turn >= self.settings.turn_cap:
            self._finish_round(False)
        else:
            self._emit_state()
        return reward

    async def agent_turn(self) -> None:
        """The agent seat's whole turn: plan, speak (comm only), move."""
        async with self.lock:
            if (
                self.game_over
                or not self.condition.has_agent
                or self.state.in_control is not Player.E
            ):
                return
            self._emit_shared(
                "flag-proposal", {"v": 1, "status": "thinking", "flag": None}
            )
            f_in = self._from_human_flag if self.condition.talking_agent else Flag.NONE
            started = time.perf_counter()
            action, f_out = await asyncio.to_thread(
                plan, self.state, f_in, self.memory, self.game, self.planner_config
            )
            self.current_log.duration_s += time.perf_counter() - started
            self.last_agent_action = action

            text: str | None = None
            if self.condition.talking_agent:
                refused = f_in.to_direction() if f_out is Flag.REJECT else None
                text = render_flag(
                    f_out,
                    self._agent_info(action),
                    rejecting=refused,
                    llm=self.llm,
                )
                self._emit_shared(
                    "flag-proposal", {"v": 1, "status": "proposed", "flag": f_out.value}
                )
                if text is not None:
                    self._record_chat(Player.E, text)
            logged_in = f_in if self.condition.talking_agent else Flag.NONE
            logged_out = f_out if self.condition.talking_agent else Flag.NONE
            heard = self._from_human_text if self.condition.talking_agent else None
            self._from_human_flag = Flag.NONE
            self._from_human_text = None
            round_log = self.current_log
            self._apply_move(
                Player.E,
                action,
                flag_in=logged_in,
                flag_out=logged_out,
                message_in=heard,
                message_out=text,
            )
            if self.current_log is round_log:
                # deliver the proposal to the human's next move; a round
                # transition already reset the channel instead
                self._to_human_flag = logged_out
                self._to_human_text = text

    async def submit_chat(self, client_id: str, text: str) -> dict[str, Any]:
        async with self.lock:
            seat = self.seat_of(client_id)
            if not self.condition.chat_allowed:
                raise ProtocolError(409, "this session has no chat channel")
            if self.game_over:
                raise ProtocolError(409, "the game is over")
            try:
                check_message_length(text)
            except ValueError as exc:
                raise ProtocolError(400, str(exc)) from None

            self._record_chat(seat, text)
            if self.condition is SessionCondition.VS_HUMAN:
                return {"v": 1, "delivered": True}

            flag = parse_message(text, llm=self.llm)
            if flag is Flag.INQUIRY:
                # answered in place; asking never consumes a turn
                reply = render_flag(
                    Flag.INQUIRY,
                    self._agent_info(self.last_agent_action),
                    inquiry_text=text,
                    llm=self.llm,
                )
                assert reply is not None
                self._record_chat(Player.E, reply)
            else:
                self._from_human_flag = flag
                self._from_human_text = text
            return {"v": 1, "delivered": True}

    def _agent_info(self, action: Direction) -> GameInfoSnapshot:
        visible = self.state.treasure_side is Player.E
        return GameInfoSnapshot(
            token=self.state.token,
            action=action,
            treasure=self.state.treasure if visible else None,
            treasure_visible=visible,
        )

    def _record_chat(self, seat: Player, text: str) -> None:
        self.chat_history.append({"from": seat.value, "text": text})
        self._emit_shared("chat", {"v": 1, "from": seat.value, "text": text})

    # ----- persistence ----------------------------------------------------

    @staticmethod
    def _append_jsonl(path: Path, record: dict[str, Any]) -> None:
        with path.open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(record) + "\n")


class SessionStore:
    """All live sessions of one server process."""

    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}

    def add(self, session: Session) -> None:
        self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise ProtocolError(404, "no such session") from None

    @staticmethod
    def new_id() -> str:
        return secrets.token_urlsafe(8)

    @staticmethod
    def new_seed() -> int:
        return secrets.randbits(32)
