"""Value types for the shared-control maze game.

Coordinates: [0, 0] is the top-left cell, x grows to the right and y grows
downward.  A maze side stores the walls one player can see; the two sides
of a board share dimensions but not wall layouts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple


class Player(Enum):
    """Seat identity: E is the planning agent, H the human (or proxy)."""

    E = "E"
    H = "H"

    @property
    def other(self) -> "Player":
        return Player.H if self is Player.E else Player.E

    def __str__(self) -> str:
        return self.value


class Direction(Enum):
    """The five token actions.  NOOP passes the turn in place."""

    NOOP = 0
    RIGHT = 1
    UP = 2
    LEFT = 3
    DOWN = 4

    @property
    def dx(self) -> int:
        return _DELTAS[self][0]

    @property
    def dy(self) -> int:
        return _DELTAS[self][1]

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITES[self]

    @property
    def bit(self) -> int:
        """Wall-bitmask bit: Right=1, Up=2, Left=4, Down=8.  NOOP has none."""
        if self is Direction.NOOP:
            raise ValueError("NOOP has no wall bit")
        return 1 << (self.value - 1)

    @property
    def word(self) -> str:
        return self.name.lower()

    @classmethod
    def from_word(cls, word: str) -> "Direction":
        try:
            return cls[word.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown direction {word!r}") from None


_DELTAS = {
    Direction.NOOP: (0, 0),
    Direction.RIGHT: (1, 0),
    Direction.UP: (0, -1),
    Direction.LEFT: (-1, 0),
    Direction.DOWN: (0, 1),
}

_OPPOSITES = {
    Direction.NOOP: Direction.NOOP,
    Direction.RIGHT: Direction.LEFT,
    Direction.LEFT: Direction.RIGHT,
    Direction.UP: Direction.DOWN,
    Direction.DOWN: Direction.UP,
}

#: The four moving directions, in wall-bit order.
MOVES = (Direction.RIGHT, Direction.UP, Direction.LEFT, Direction.DOWN)


class Cell(NamedTuple):
    x: int
    y: int

    def step(self, direction: Direction) -> "Cell":
        return Cell(self.x + direction.dx, self.y + direction.dy)

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


Wall = tuple[Cell, Direction]


@dataclass(frozen=True)
class MazeSide:
    """One player's view of the board: dimensions plus that side's walls.

    Invariants enforced at construction:
      * walls reference in-grid cells and non-NOOP directions only;
      * symmetry: a wall between two in-grid cells is recorded from both;
      * boundary closure: every (cell, direction) stepping off-grid is a wall.
    """

    width: int
    height: int
    walls: frozenset[Wall]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("maze dimensions must be positive")
        for cell, direction in self.walls:
            if direction is Direction.NOOP:
                raise ValueError(f"NOOP cannot be walled at {cell}")
            if not self.in_grid(cell):
                raise ValueError(f"wall at out-of-grid cell {cell}")
            neighbor = cell.step(direction)
            if self.in_grid(neighbor) and (neighbor, direction.opposite) not in self.walls:
                raise ValueError(f"asymmetric wall {cell} -> {direction.word}")
        for cell, direction in self._boundary():
            if (cell, direction) not in self.walls:
                raise ValueError(f"open boundary at {cell} -> {direction.word}")

    def _boundary(self) -> Iterable[Wall]:
        for y in range(self.height):
            for x in range(self.width):
                cell = Cell(x, y)
                for d in MOVES:
                    if not self.in_grid(cell.step(d)):
                        yield cell, d

    def in_grid(self, cell: Cell) -> bool:
        return 0 <= cell.x < self.width and 0 <= cell.y < self.height

    def blocked(self, cell: Cell, direction: Direction) -> bool:
        if direction is Direction.NOOP:
            return False
        return (cell, direction) in self.walls

    @classmethod
    def build(cls, width: int, height: int, blocked: Iterable[Wall] = ()) -> "MazeSide":
        """Construct from a partial wall list, adding mirrors and the border."""
        walls: set[Wall] = set()

        def in_grid(cell: Cell) -> bool:
            return 0 <= cell.x < width and 0 <= cell.y < height

        for y in range(height):
            for x in range(width):
                cell = Cell(x, y)
                for d in MOVES:
                    if not in_grid(cell.step(d)):
                        walls.add((cell, d))
        for cell, direction in blocked:
            if direction is Direction.NOOP:
                raise ValueError("cannot wall NOOP")
            if not in_grid(cell):
                raise ValueError(f"blocked cell {cell} outside {width}x{height} grid")
            walls.add((cell, direction))
            neighbor = cell.step(direction)
            if in_grid(neighbor):
                walls.add((neighbor, direction.opposite))
        return cls(width, height, frozenset(walls))

    @classmethod
    def open_grid(cls, width: int, height: int) -> "MazeSide":
        """A side with border walls only."""
        return cls.build(width, height)

    def cell_mask(self, cell: Cell) -> int:
        mask = 0
        for d in MOVES:
            if (cell, d) in self.walls:
                mask |= d.bit
        return mask

    def to_bitmask_rows(self) -> list[str]:
        """Hex rows, one char per cell, row y=0 first."""
        return [
            "".join(format(self.cell_mask(Cell(x, y)), "x") for x in range(self.width))
            for y in range(self.height)
        ]

    @classmethod
    def from_bitmask_rows(cls, width: int, height: int, rows: list[str]) -> "MazeSide":
        if len(rows) != height:
            raise ValueError(f"expected {height} rows, got {len(rows)}")
        walls: set[Wall] = set()
        for y, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {y} has {len(row)} cells, expected {width}")
            for x, char in enumerate(row):
                try:
                    mask = int(char, 16)
                except ValueError:
                    raise ValueError(f"bad hex digit {char!r} in row {y}") from None
                for d in MOVES:
                    if mask & d.bit:
                        walls.add((Cell(x, y), d))
        return cls(width, height, frozenset(walls))


class MoveOutcome(Enum):
    MOVED = "moved"
    BLOCKED = "blocked"
    REACHED_GOAL = "reached_goal"


@dataclass(frozen=True)
class RewardSpec:
    """Common-reward scheme shared by both players."""

    goal_reward: float = 1.0
    step_penalty: float = -0.01
    wall_penalty: float = -0.05

    def __post_init__(self) -> None:
        if self.goal_reward <= 0:
            raise ValueError("goal_reward must be positive")
        if self.step_penalty > 0 or self.wall_penalty > 0:
            raise ValueError("penalties must be non-positive")


@dataclass(frozen=True)
class GameState:
    """Public snapshot of one round: token, whose turn, and the goal."""

    token: Cell
    in_control: Player
    turn: int
    treasure: Cell
    treasure_side: Player
    round_no: int = 1

    def __post_init__(self) -> None:
        if self.turn < 0:
            raise ValueError("turn must be non-negative")
        if self.round_no < 1:
            raise ValueError("round_no starts at 1")
