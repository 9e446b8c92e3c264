"""Seeded board generation.

Each side starts as a recursive-backtracker spanning maze, then a fraction
of the remaining interior walls is knocked out independently per side so
the layouts diverge and loops appear.  Generated boards are re-rolled until
the joint oracle confirms every round is winnable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from gnomes.core.oracle import joint_oracle
from gnomes.core.types import Cell, Direction, MazeSide, MOVES, Player, Wall

DEFAULT_REMOVAL_DENSITY = 0.15
ROUND_COUNT = 5


def _treasure_side(round_no: int) -> Player:
    """Round schedule: the human sees rounds 1, 3, 5; the agent 2 and 4."""
    return Player.H if round_no % 2 == 1 else Player.E


@dataclass(frozen=True)
class RoundTreasure:
    round_no: int
    cell: Cell
    side: Player


@dataclass(frozen=True)
class MazeSetup:
    """A full board: both sides, the starting cell, and the round schedule."""

    side_e: MazeSide
    side_h: MazeSide
    start: Cell
    treasures: tuple[RoundTreasure, ...]

    @property
    def width(self) -> int:
        return self.side_e.width

    @property
    def height(self) -> int:
        return self.side_e.height

    def treasure_for(self, round_no: int) -> RoundTreasure:
        for t in self.treasures:
            if t.round_no == round_no:
                return t
        raise KeyError(f"no treasure for round {round_no}")

    def start_for(self, round_no: int) -> Cell:
        """Rounds chain: each starts where the previous treasure was found."""
        if round_no == 1:
            return self.start
        return self.treasure_for(round_no - 1).cell

    def side_for(self, player: Player) -> MazeSide:
        return self.side_e if player is Player.E else self.side_h


def _spanning_walls(width: int, height: int, rng: random.Random) -> set[Wall]:
    """Interior walls of a depth-first spanning maze (border excluded)."""
    carved: set[frozenset[Cell]] = set()
    visited = {Cell(rng.randrange(width), rng.randrange(height))}
    stack = list(visited)
    while stack:
        cell = stack[-1]
        neighbors = [
            cell.step(d)
            for d in MOVES
            if 0 <= cell.step(d).x < width and 0 <= cell.step(d).y < height
        ]
        fresh = [n for n in neighbors if n not in visited]
        if not fresh:
            stack.pop()
            continue
        nxt = fresh[rng.randrange(len(fresh))]
        carved.add(frozenset((cell, nxt)))
        visited.add(nxt)
        stack.append(nxt)

    walls: set[Wall] = set()
    for y in range(height):
        for x in range(width):
            cell = Cell(x, y)
            for d in (Direction.RIGHT, Direction.DOWN):
                neighbor = cell.step(d)
                if neighbor.x >= width or neighbor.y >= height:
                    continue
                if frozenset((cell, neighbor)) not in carved:
                    walls.add((cell, d))
    return walls


def _generate_side(width: int, height: int, rng: random.Random, density: float) -> MazeSide:
    walls = _spanning_walls(width, height, rng)
    # Draw in a fixed order: set iteration is not stable across processes
    # (enum hashes vary), and each wall consumes one rng draw.
    ordered = sorted(walls, key=lambda w: (w[0].y, w[0].x, w[1].value))
    kept = [w for w in ordered if rng.random() >= density]
    return MazeSide.build(width, height, kept)


def generate_maze_pair(
    seed: int,
    width: int = 9,
    height: int = 9,
    removal_density: float = DEFAULT_REMOVAL_DENSITY,
) -> tuple[MazeSide, MazeSide, Cell, Cell]:
    """Deterministic (side_e, side_h, start, treasure) for one round.

    Re-rolls internally until the joint game is solvable, so equal seeds
    give equal boards and every returned board is winnable.
    """
    if width * height < 2:
        raise ValueError("board too small for distinct start and treasure")
    rng = random.Random(seed)
    while True:
        side_e = _generate_side(width, height, rng, removal_density)
        side_h = _generate_side(width, height, rng, removal_density)
        start = Cell(rng.randrange(width), rng.randrange(height))
        treasure = start
        while treasure == start:
            treasure = Cell(rng.randrange(width), rng.randrange(height))
        if joint_oracle(side_e, side_h, start, treasure) is not None:
            return side_e, side_h, start, treasure


def generate_setup(
    seed: int,
    width: int = 9,
    height: int = 9,
    rounds: int = ROUND_COUNT,
    removal_density: float = DEFAULT_REMOVAL_DENSITY,
) -> MazeSetup:
    """Deterministic multi-round board with distinct treasures.

    Round k starts at round k-1's treasure; every leg is verified solvable
    before the setup is returned.
    """
    if rounds < 1:
        raise ValueError("need at least one round")
    if width * height < rounds + 1:
        raise ValueError(f"{width}x{height} board cannot host {rounds} distinct treasures")
    rng = random.Random(seed)
    while True:
        side_e = _generate_side(width, height, rng, removal_density)
        side_h = _generate_side(width, height, rng, removal_density)
        cells = [Cell(x, y) for y in range(height) for x in range(width)]
        picks = rng.sample(cells, rounds + 1)
        start, spots = picks[0], picks[1:]
        treasures = tuple(
            RoundTreasure(i + 1, cell, _treasure_side(i + 1)) for i, cell in enumerate(spots)
        )
        legs = [start] + [t.cell for t in treasures]
        if all(
            joint_oracle(side_e, side_h, legs[i], legs[i + 1]) is not None
            for i in range(len(legs) - 1)
        ):
            return MazeSetup(side_e, side_h, start, treasures)
