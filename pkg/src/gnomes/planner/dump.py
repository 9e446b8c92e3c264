"""Debug serialization of a finished search: tree statistics plus the
refusal map, in a stable versioned JSON shape for offline inspection."""

from __future__ import annotations

from collections import deque
from typing import Any

from gnomes.planner.game import PlannerGame
from gnomes.planner.memory import HiddenInfo
from gnomes.planner.node import SearchNode

ACTION_WORDS = {-1: None, 0: "noop", 1: "right", 2: "up", 3: "left", 4: "down"}


def dump_tree(root: SearchNode, omega: HiddenInfo, game: PlannerGame) -> dict[str, Any]:
    nodes: list[dict[str, Any]] = []
    ids: dict[int, int] = {id(root): 0}
    queue: deque[SearchNode] = deque([root])
    while queue:
        node = queue.popleft()
        cell = game.cell(node.cell)
        nodes.append(
            {
                "id": ids[id(node)],
                "parent": None if node.parent is None else ids[id(node.parent)],
                "action": ACTION_WORDS[node.action],
                "cell": [cell.x, cell.y],
                "mover": "E" if node.mover == 0 else "H",
                "visits": node.visits,
                "total": node.total,
            }
        )
        for a in sorted(node.children):
            child = node.children[a]
            ids[id(child)] = len(ids)
            queue.append(child)
    return {
        "v": 1,
        "kind": "search-dump",
        "board": {"width": game.width, "height": game.height},
        "nodes": nodes,
        "refusals": omega.to_dict(),
    }
