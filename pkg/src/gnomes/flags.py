"""The nine-symbol intent-flag alphabet exchanged between players.

Five action flags mirror the token actions one-to-one; Accept/Reject answer
a partner's proposal; Inquiry asks for information; None means silence.
Flag values double as the canonical wire/prompt labels.
"""

from __future__ import annotations

from enum import Enum

from gnomes.core.types import Direction


class Flag(Enum):
    NOOP = "noop"
    RIGHT = "right"
    UP = "up"
    LEFT = "left"
    DOWN = "down"
    ACCEPT = "Accept"
    REJECT = "Reject"
    INQUIRY = "Inquiry"
    NONE = "None"

    @property
    def is_action(self) -> bool:
        return self in _FLAG_TO_DIRECTION

    def to_direction(self) -> Direction | None:
        """The matching token action, or None for non-action flags."""
        return _FLAG_TO_DIRECTION.get(self)

    @classmethod
    def from_direction(cls, direction: Direction) -> "Flag":
        return _DIRECTION_TO_FLAG[direction]

    @classmethod
    def from_label(cls, label: str) -> "Flag":
        normalized = label.strip().lower()
        for flag in cls:
            if flag.value.lower() == normalized:
                return flag
        raise ValueError(f"unknown flag label {label!r}")

    def __str__(self) -> str:
        return self.value


_FLAG_TO_DIRECTION = {
    Flag.NOOP: Direction.NOOP,
    Flag.RIGHT: Direction.RIGHT,
    Flag.UP: Direction.UP,
    Flag.LEFT: Direction.LEFT,
    Flag.DOWN: Direction.DOWN,
}

_DIRECTION_TO_FLAG = {d: f for f, d in _FLAG_TO_DIRECTION.items()}

ACTION_FLAGS = tuple(_FLAG_TO_DIRECTION)
