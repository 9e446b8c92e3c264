"""Move legality, transitions, and rewards.

Each player consults only their own side's walls; a move blocked on the
mover's side raises :class:`RejectedMove` and the caller decides whether to
charge the wall penalty (live play) or treat it as a bug (search code never
proposes blocked moves).
"""

from __future__ import annotations

from dataclasses import replace

from gnomes.core.types import (
    Cell,
    Direction,
    GameState,
    MazeSide,
    MoveOutcome,
    MOVES,
    RewardSpec,
)


class RejectedMove(Exception):
    """A move ran into a wall on the mover's side."""

    def __init__(self, cell: Cell, direction: Direction):
        self.cell = cell
        self.direction = direction
        super().__init__(f"wall blocks {direction.word} from {cell}")


def valid_actions(side: MazeSide, cell: Cell) -> set[Direction]:
    """Actions available at ``cell`` on ``side``.  Never empty: NOOP always is."""
    if not side.in_grid(cell):
        raise ValueError(f"cell {cell} outside {side.width}x{side.height} grid")
    actions = {Direction.NOOP}
    for d in MOVES:
        if not side.blocked(cell, d):
            actions.add(d)
    return actions


def apply(side: MazeSide, state: GameState, action: Direction) -> GameState:
    """Apply a legal action for the player in control; returns the new state.

    Control passes to the other player and the turn counter advances, for
    NOOP as well: passing still consumes the turn.
    """
    if not side.in_grid(state.token):
        raise ValueError(f"token {state.token} outside grid")
    if action is not Direction.NOOP and side.blocked(state.token, action):
        raise RejectedMove(state.token, action)
    return replace(
        state,
        token=state.token.step(action),
        in_control=state.in_control.other,
        turn=state.turn + 1,
    )


def reward(spec: RewardSpec, state: GameState, action: Direction, outcome: MoveOutcome) -> float:
    """Common reward for one attempted action, by outcome."""
    if outcome is MoveOutcome.REACHED_GOAL:
        return spec.goal_reward
    if outcome is MoveOutcome.BLOCKED:
        return spec.wall_penalty + spec.step_penalty
    return spec.step_penalty


def is_final(state: GameState) -> bool:
    """The round ends exactly when the token sits on the treasure."""
    return state.token == state.treasure
