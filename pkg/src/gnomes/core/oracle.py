"""Full-information solvers used for maze validation and as test oracles.

The joint oracle sees both sides at once, which neither player does in
play; it answers "is this board solvable and in how few turns" by BFS over
(cell, player-to-move) pairs.  Turn alternation is part of the state:
waiting out the other player costs a NOOP turn.
"""

from __future__ import annotations

from collections import deque

from gnomes.core.engine import valid_actions
from gnomes.core.types import Cell, Direction, MazeSide, Player

JointPlan = list[tuple[Player, Direction]]


def joint_oracle(
    side_e: MazeSide,
    side_h: MazeSide,
    start: Cell,
    goal: Cell,
    first_mover: Player = Player.H,
) -> JointPlan | None:
    """Minimum-turn plan from ``start`` to ``goal`` with alternating control.

    Returns the action sequence as (mover, action) pairs, or None when the
    goal is unreachable.  An already-solved instance yields the empty plan.
    """
    if side_e.width != side_h.width or side_e.height != side_h.height:
        raise ValueError("sides disagree on dimensions")
    if not side_e.in_grid(start) or not side_e.in_grid(goal):
        raise ValueError("start or goal outside grid")
    if start == goal:
        return []

    sides = {Player.E: side_e, Player.H: side_h}
    seen: dict[tuple[Cell, Player], tuple[Cell, Player, Direction] | None] = {
        (start, first_mover): None
    }
    queue: deque[tuple[Cell, Player]] = deque([(start, first_mover)])
    while queue:
        cell, mover = queue.popleft()
        # Fixed expansion order keeps the returned plan stable across runs.
        for action in sorted(valid_actions(sides[mover], cell), key=lambda d: d.value):
            nxt = (cell.step(action), mover.other)
            if nxt in seen:
                continue
            seen[nxt] = (cell, mover, action)
            if nxt[0] == goal:
                plan: JointPlan = []
                cursor: tuple[Cell, Player] | None = nxt
                while cursor is not None:
                    back = seen[cursor]
                    if back is None:
                        break
                    prev_cell, prev_mover, act = back
                    plan.append((prev_mover, act))
                    cursor = (prev_cell, prev_mover)
                plan.reverse()
                return plan
            queue.append(nxt)
    return None


def side_distances(side: MazeSide, goal: Cell) -> dict[Cell, int]:
    """BFS step counts to ``goal`` using one side's walls only.

    Cells a single player cannot reach alone are absent from the result.
    """
    if not side.in_grid(goal):
        raise ValueError("goal outside grid")
    dist = {goal: 0}
    queue = deque([goal])
    while queue:
        cell = queue.popleft()
        for action in valid_actions(side, cell):
            if action is Direction.NOOP:
                continue
            neighbor = cell.step(action)
            if neighbor not in dist:
                dist[neighbor] = dist[cell] + 1
                queue.append(neighbor)
    return dist
