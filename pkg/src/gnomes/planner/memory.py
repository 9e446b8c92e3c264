"""Planner state that outlives a single decision.

The hidden-information dictionary accumulates which moves the partner has
refused at which cells; it only grows, because walls do not move.  The
memory also carries the last emitted flag (a Reject from the partner refers
to it) and the seeded RNG all tie-breaking draws come from.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from math import sqrt
from typing import Iterator

from gnomes.core.types import Cell, Direction
from gnomes.flags import Flag

log = logging.getLogger(__name__)


class HiddenInfo:
    """Map from cell to the set of partner moves refused there.

    NOOP is never recorded: passing is always legal, so a NOOP rejection is
    a protocol anomaly, not information about walls.
    """

    def __init__(self) -> None:
        self._refused: dict[Cell, set[Direction]] = {}

    def add(self, cell: Cell, direction: Direction) -> None:
        if direction is Direction.NOOP:
            log.warning("protocol anomaly: NOOP rejection at %s ignored", cell)
            return
        self._refused.setdefault(cell, set()).add(direction)

    def refused_at(self, cell: Cell) -> frozenset[Direction]:
        return frozenset(self._refused.get(cell, ()))

    def __contains__(self, item: tuple[Cell, Direction]) -> bool:
        cell, direction = item
        return direction in self._refused.get(cell, ())

    def __len__(self) -> int:
        return sum(len(v) for v in self._refused.values())

    def items(self) -> Iterator[tuple[Cell, frozenset[Direction]]]:
        for cell, dirs in self._refused.items():
            yield cell, frozenset(dirs)

    def to_dict(self) -> dict[str, list[str]]:
        return {
            f"{cell.x},{cell.y}": sorted(d.word for d in dirs)
            for cell, dirs in self._refused.items()
        }

    @classmethod
    def from_dict(cls, data: dict[str, list[str]]) -> "HiddenInfo":
        info = cls()
        for key, words in data.items():
            x, y = (int(p) for p in key.split(","))
            for word in words:
                info.add(Cell(x, y), Direction.from_word(word))
        return info


@dataclass
class PlannerMemory:
    """Cross-decision planner state: refusals, last flag, RNG stream."""

    rng_seed: int = 0
    omega: HiddenInfo = field(default_factory=HiddenInfo)
    last_flag: Flag = Flag.NONE
    rng: random.Random = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.rng = random.Random(self.rng_seed)


@dataclass(frozen=True)
class PlannerConfig:
    """Search budget knobs.

    ``rollout_cap`` limits the steps walked per iteration; None derives
    4 * width * height from the board.  Returns are undiscounted sums.
    """

    iterations: int = 100
    exploration: float = sqrt(2)
    rollout_cap: int | None = None

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.exploration < 0:
            raise ValueError("exploration constant must be non-negative")
        if self.rollout_cap is not None and self.rollout_cap < 1:
            raise ValueError("rollout_cap must be positive")

    def cap_for(self, width: int, height: int) -> int:
        return self.rollout_cap if self.rollout_cap is not None else 4 * width * height
