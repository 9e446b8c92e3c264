"""Episode transcripts: every applied action with its communication context.

Entries record only applied actions (blocked live-play attempts live in the
server event log), so movers strictly alternate and a transcript can be
replayed through the engine to reproduce the final state exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from gnomes.core import engine
from gnomes.core.types import Cell, Direction, GameState, MazeSide, Player


@dataclass(frozen=True)
class EpisodeEntry:
    turn: int
    player: Player
    state: GameState
    action: Direction
    flag_in: str
    flag_out: str
    message_in: str | None
    message_out: str | None
    reward: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "turn": self.turn,
            "player": self.player.value,
            "state": _state_to_dict(self.state),
            "action": self.action.word,
            "flag_in": self.flag_in,
            "flag_out": self.flag_out,
            "message_in": self.message_in,
            "message_out": self.message_out,
            "reward": self.reward,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EpisodeEntry":
        return cls(
            turn=data["turn"],
            player=Player(data["player"]),
            state=_state_from_dict(data["state"]),
            action=Direction.from_word(data["action"]),
            flag_in=data["flag_in"],
            flag_out=data["flag_out"],
            message_in=data.get("message_in"),
            message_out=data.get("message_out"),
            reward=data["reward"],
        )


@dataclass
class EpisodeLog:
    """One round's transcript plus outcome metadata."""

    round_no: int
    first_mover: Player = Player.H
    entries: list[EpisodeEntry] = field(default_factory=list)
    solved: bool = False
    duration_s: float = 0.0

    def append(self, entry: EpisodeEntry) -> None:
        expected = self.first_mover if not self.entries else self.entries[-1].player.other
        if entry.player is not expected:
            raise ValueError(f"entry for {entry.player} out of order, expected {expected}")
        if entry.turn != len(self.entries):
            raise ValueError(f"turn {entry.turn} out of sequence")
        self.entries.append(entry)

    @property
    def turns(self) -> int:
        return len(self.entries)

    def replay(self, side_e: MazeSide, side_h: MazeSide) -> GameState:
        """Re-apply every action through the engine; returns the final state.

        Raises if any recorded transition disagrees with the rules.
        """
        if not self.entries:
            raise ValueError("empty episode")
        state = self.entries[0].state
        for entry in self.entries:
            if entry.state != state:
                raise ValueError(f"turn {entry.turn}: recorded state diverges from replay")
            side = side_e if entry.player is Player.E else side_h
            state = engine.apply(side, state, entry.action)
        if self.solved and not engine.is_final(state):
            raise ValueError("log claims solved but replay did not reach the treasure")
        return state

    def to_dict(self) -> dict[str, Any]:
        return {
            "v": 1,
            "kind": "episode-log",
            "round": self.round_no,
            "first_mover": self.first_mover.value,
            "solved": self.solved,
            "turns": self.turns,
            "duration_s": self.duration_s,
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EpisodeLog":
        log = cls(
            round_no=data["round"],
            first_mover=Player(data.get("first_mover", "H")),
            solved=data["solved"],
            duration_s=data.get("duration_s", 0.0),
        )
        for raw in data["entries"]:
            log.entries.append(EpisodeEntry.from_dict(raw))
        return log


def _state_to_dict(state: GameState) -> dict[str, Any]:
    return {
        "token": [state.token.x, state.token.y],
        "in_control": state.in_control.value,
        "turn": state.turn,
        "treasure": [state.treasure.x, state.treasure.y],
        "treasure_side": state.treasure_side.value,
        "round": state.round_no,
    }


def _state_from_dict(data: dict[str, Any]) -> GameState:
    return GameState(
        token=Cell(*data["token"]),
        in_control=Player(data["in_control"]),
        turn=data["turn"],
        treasure=Cell(*data["treasure"]),
        treasure_side=Player(data["treasure_side"]),
        round_no=data["round"],
    )
