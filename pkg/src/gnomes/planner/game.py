"""The planner's view of one round.

The agent knows its own walls exactly and the board dimensions; it never
sees the partner's walls, so partner moves are modeled as "anything that
stays on the board and has not been refused here".  The goal cell is known
only in rounds where the treasure is shown to the agent.

Tables are precomputed over flat cell indices (y * width + x) with actions
as small ints so the search inner loop stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

from gnomes.core.engine import valid_actions
from gnomes.core.types import Cell, Direction, GameState, MazeSide, Player, RewardSpec
from gnomes.planner.memory import HiddenInfo

#: Action ids reuse Direction values: 0=noop 1=right 2=up 3=left 4=down.
ACTION_COUNT = 5
_DIRS = [Direction.NOOP, Direction.RIGHT, Direction.UP, Direction.LEFT, Direction.DOWN]

#: Sentinel index for "goal unknown"; no real cell index is negative.
NO_GOAL = -1


@dataclass(frozen=True)
class PlannerGame:
    width: int
    height: int
    goal: int
    goal_reward: float
    step_penalty: float
    own_moves: tuple[tuple[int, ...], ...]
    open_moves: tuple[tuple[int, ...], ...]
    next_cell: tuple[tuple[int, ...], ...]

    @classmethod
    def from_side(
        cls,
        side_e: MazeSide,
        goal: Cell | None,
        rewards: RewardSpec = RewardSpec(),
    ) -> "PlannerGame":
        w, h = side_e.width, side_e.height
        own: list[tuple[int, ...]] = []
        open_: list[tuple[int, ...]] = []
        nxt: list[tuple[int, ...]] = []
        for y in range(h):
            for x in range(w):
                cell = Cell(x, y)
                own.append(
                    tuple(sorted(d.value for d in valid_actions(side_e, cell)))
                )
                in_grid = [0] + [
                    d.value for d in _DIRS[1:] if side_e.in_grid(cell.step(d))
                ]
                open_.append(tuple(in_grid))
                row = []
                for a in range(ACTION_COUNT):
                    d = _DIRS[a]
                    target = cell.step(d)
                    row.append(target.y * w + target.x if side_e.in_grid(target) else -1)
                nxt.append(tuple(row))
        goal_idx = NO_GOAL if goal is None else goal.y * w + goal.x
        if goal is not None and not side_e.in_grid(goal):
            raise ValueError(f"goal {goal} outside grid")
        return cls(
            width=w,
            height=h,
            goal=goal_idx,
            goal_reward=rewards.goal_reward,
            step_penalty=rewards.step_penalty,
            own_moves=tuple(own),
            open_moves=tuple(open_),
            next_cell=tuple(nxt),
        )

    @classmethod
    def for_state(
        cls, side_e: MazeSide, state: GameState, rewards: RewardSpec = RewardSpec()
    ) -> "PlannerGame":
        """Goal visibility follows the round's treasure side."""
        goal = state.treasure if state.treasure_side is Player.E else None
        return cls.from_side(side_e, goal, rewards)

    def index(self, cell: Cell) -> int:
        if not (0 <= cell.x < self.width and 0 <= cell.y < self.height):
            raise ValueError(f"cell {cell} outside grid")
        return cell.y * self.width + cell.x

    def cell(self, index: int) -> Cell:
        return Cell(index % self.width, index // self.width)

    def partner_moves(self, omega: HiddenInfo) -> list[tuple[int, ...]]:
        """Per-cell candidate actions for the partner: on-board minus refused.

        NOOP survives every filter, so no entry is ever empty.
        """
        refused: dict[int, set[int]] = {}
        for cell, dirs in omega.items():
            refused[self.index(cell)] = {d.value for d in dirs}
        table: list[tuple[int, ...]] = []
        for idx, base in enumerate(self.open_moves):
            bad = refused.get(idx)
            table.append(base if not bad else tuple(a for a in base if a not in bad))
        return table
