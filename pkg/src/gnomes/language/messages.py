"""Chat-message value types."""

from __future__ import annotations

from dataclasses import dataclass

from gnomes.core.types import Cell, Direction

#: Hard ceiling applied wherever messages enter the system.
MAX_MESSAGE_CHARS = 500


def check_message_length(text: str) -> str:
    if len(text) > MAX_MESSAGE_CHARS:
        raise ValueError(f"message exceeds {MAX_MESSAGE_CHARS} characters")
    return text


@dataclass(frozen=True)
class GameInfoSnapshot:
    """What the agent may verbalize: its position, its move, and the
    treasure only when this round shows it to the agent."""

    token: Cell
    action: Direction
    treasure: Cell | None
    treasure_visible: bool

    def __post_init__(self) -> None:
        if self.treasure_visible != (self.treasure is not None):
            raise ValueError("treasure must be present exactly when visible")
