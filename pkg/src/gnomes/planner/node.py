"""Search-tree nodes.

Cheap by design: plain slots, action ids and flat cell indices, children
keyed by action id.  ``untried`` is None until the node is first selected
from, then a shuffled to-do list popped from the back.
"""

from __future__ import annotations


class SearchNode:
    __slots__ = ("parent", "action", "cell", "mover", "children", "untried", "visits", "total")

    def __init__(self, parent: "SearchNode | None", action: int, cell: int, mover: int):
        self.parent = parent
        self.action = action  # incoming action id; -1 at roots
        self.cell = cell
        self.mover = mover  # 0 = agent to move here, 1 = partner
        self.children: dict[int, SearchNode] = {}
        self.untried: list[int] | None = None
        self.visits = 0
        self.total = 0.0

    def __repr__(self) -> str:
        return (
            f"SearchNode(cell={self.cell}, mover={self.mover}, action={self.action}, "
            f"visits={self.visits}, total={self.total:.3f}, children={len(self.children)})"
        )
