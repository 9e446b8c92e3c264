"""Scoring the agent's learned wall map against the partner's real walls.

Every refusal the agent banked claims one partner-side wall.  Claims are
normalized to undirected interior edges and compared with ground truth;
border walls are shared knowledge and excluded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from gnomes.core.types import Cell, Direction, MazeSide
from gnomes.planner import HiddenInfo, PlannerMemory

#: Undirected edge in canonical form: direction is RIGHT or DOWN.
Edge = tuple[Cell, Direction]


def canonical_edge(cell: Cell, direction: Direction) -> Edge:
    if direction in (Direction.LEFT, Direction.UP):
        return (cell.step(direction), direction.opposite)
    return (cell, direction)


def interior_walls(side: MazeSide) -> frozenset[Edge]:
    """The side's wall edges with both endpoints on the board."""
    edges = set()
    for cell, direction in side.walls:
        if direction is Direction.NOOP:
            continue
        if side.in_grid(cell.step(direction)):
            edges.add(canonical_edge(cell, direction))
    return frozenset(edges)


@dataclass(frozen=True)
class HeatmapReport:
    width: int
    height: int
    true_positives: frozenset[Edge]
    false_positives: frozenset[Edge]
    false_negatives: frozenset[Edge]

    @property
    def counts(self) -> dict[str, int]:
        return {
            "true_positives": len(self.true_positives),
            "false_positives": len(self.false_positives),
            "false_negatives": len(self.false_negatives),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "v": 1,
            "kind": "heatmap",
            "width": self.width,
            "height": self.height,
            "counts": self.counts,
            "true_positives": _edge_list(self.true_positives),
            "false_positives": _edge_list(self.false_positives),
            "false_negatives": _edge_list(self.false_negatives),
        }

    def render(self) -> str:
        """ASCII board: # known wall, ! false claim, ? unknown wall."""
        cols, rows = 2 * self.width + 1, 2 * self.height + 1
        grid = [[" "] * cols for _ in range(rows)]
        for gy in range(0, rows, 2):
            for gx in range(0, cols, 2):
                grid[gy][gx] = "+"
        for gx in range(cols):
            grid[0][gx] = "+" if gx % 2 == 0 else "-"
            grid[rows - 1][gx] = "+" if gx % 2 == 0 else "-"
        for gy in range(rows):
            if gy % 2 == 1:
                grid[gy][0] = "|"
                grid[gy][cols - 1] = "|"
        marks = [
            (self.true_positives, "#"),
            (self.false_negatives, "?"),
            (self.false_positives, "!"),
        ]
        for edges, mark in marks:
            for cell, direction in edges:
                if direction is Direction.RIGHT:
                    grid[2 * cell.y + 1][2 * cell.x + 2] = mark
                else:
                    grid[2 * cell.y + 2][2 * cell.x + 1] = mark
        body = "\n".join("".join(row) for row in grid)
        counts = self.counts
        legend = (
            f"# wall correctly learned ({counts['true_positives']})   "
            f"? wall not yet learned ({counts['false_negatives']})   "
            f"! claimed wall that is open ({counts['false_positives']})"
        )
        return f"{body}\n{legend}\n"


def emit_heatmap(memory: PlannerMemory | HiddenInfo, side_h: MazeSide) -> HeatmapReport:
    """Classify every claimed and every real interior partner wall."""
    omega = memory.omega if isinstance(memory, PlannerMemory) else memory
    claims = set()
    for cell, directions in omega.items():
        for direction in directions:
            if side_h.in_grid(cell.step(direction)):
                claims.add(canonical_edge(cell, direction))
    truth = interior_walls(side_h)
    return HeatmapReport(
        width=side_h.width,
        height=side_h.height,
        true_positives=frozenset(claims & truth),
        false_positives=frozenset(claims - truth),
        false_negatives=frozenset(truth - claims),
    )


def _edge_list(edges: Iterable[Edge]) -> list[dict[str, Any]]:
    ordered = sorted(edges, key=lambda e: (e[0].y, e[0].x, e[1].value))
    return [{"cell": [c.x, c.y], "direction": d.word} for c, d in ordered]
