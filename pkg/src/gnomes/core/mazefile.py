"""Plain-text board files.

Layout::

    gnomes-maze v1 <width> <height>
    <height rows of width hex digits>   # agent (E) side wall masks
    <height rows of width hex digits>   # human (H) side wall masks
    start <x> <y>
    treasure <round> <x> <y> <side>     # one line per round, in order

Each hex digit is a cell's wall bitmask: Right=1, Up=2, Left=4, Down=8.
Loading validates symmetry and boundary closure and reports the offending
line number on failure.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import TextIO

from gnomes.core.mazegen import MazeSetup, RoundTreasure
from gnomes.core.types import Cell, MazeSide, Player

MAGIC = "gnomes-maze"
VERSION = "v1"


class MazeFileError(ValueError):
    """Malformed board file; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def save_maze(setup: MazeSetup, target: str | Path | TextIO) -> None:
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="ascii") as handle:
            _write(setup, handle)
    else:
        _write(setup, target)


def _write(setup: MazeSetup, out: TextIO) -> None:
    out.write(f"{MAGIC} {VERSION} {setup.width} {setup.height}\n")
    for side in (setup.side_e, setup.side_h):
        for row in side.to_bitmask_rows():
            out.write(row + "\n")
    out.write(f"start {setup.start.x} {setup.start.y}\n")
    for t in setup.treasures:
        out.write(f"treasure {t.round_no} {t.cell.x} {t.cell.y} {t.side.value}\n")


def dumps_maze(setup: MazeSetup) -> str:
    buf = io.StringIO()
    _write(setup, buf)
    return buf.getvalue()


def load_maze(source: str | Path | TextIO) -> MazeSetup:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="ascii") as handle:
            return _read(handle)
    return _read(source)


def loads_maze(text: str) -> MazeSetup:
    return _read(io.StringIO(text))


def _read(handle: TextIO) -> MazeSetup:
    lines = [line.rstrip("\n") for line in handle]
    if not lines:
        raise MazeFileError(1, "empty file")

    header = lines[0].split()
    if len(header) != 4 or header[0] != MAGIC or header[1] != VERSION:
        raise MazeFileError(1, f"expected '{MAGIC} {VERSION} <width> <height>'")
    try:
        width, height = int(header[2]), int(header[3])
    except ValueError:
        raise MazeFileError(1, "width and height must be integers") from None
    if width < 1 or height < 1:
        raise MazeFileError(1, "width and height must be positive")

    expected = 1 + 2 * height
    if len(lines) < expected:
        raise MazeFileError(len(lines), f"truncated: need {2 * height} wall rows")

    sides: list[MazeSide] = []
    cursor = 1
    for label in ("E", "H"):
        rows = lines[cursor : cursor + height]
        _check_rows(rows, width, height, cursor, label)
        sides.append(MazeSide.from_bitmask_rows(width, height, rows))
        cursor += height

    start: Cell | None = None
    treasures: list[RoundTreasure] = []
    for offset, line in enumerate(lines[cursor:]):
        line_no = cursor + offset + 1
        if not line.strip():
            continue
        parts = line.split()
        if parts[0] == "start":
            if start is not None:
                raise MazeFileError(line_no, "duplicate start line")
            start = _parse_cell(parts[1:3], width, height, line_no)
            if len(parts) != 3:
                raise MazeFileError(line_no, "start takes exactly <x> <y>")
        elif parts[0] == "treasure":
            if len(parts) != 5:
                raise MazeFileError(line_no, "treasure takes <round> <x> <y> <side>")
            try:
                round_no = int(parts[1])
            except ValueError:
                raise MazeFileError(line_no, "round must be an integer") from None
            cell = _parse_cell(parts[2:4], width, height, line_no)
            if parts[4] not in ("E", "H"):
                raise MazeFileError(line_no, f"side must be E or H, got {parts[4]!r}")
            treasures.append(RoundTreasure(round_no, cell, Player(parts[4])))
        else:
            raise MazeFileError(line_no, f"unknown record {parts[0]!r}")

    if start is None:
        raise MazeFileError(len(lines), "missing start line")
    if not treasures:
        raise MazeFileError(len(lines), "missing treasure lines")
    treasures.sort(key=lambda t: t.round_no)
    if [t.round_no for t in treasures] != list(range(1, len(treasures) + 1)):
        raise MazeFileError(len(lines), "treasure rounds must be 1..k with no gaps")
    return MazeSetup(sides[0], sides[1], start, tuple(treasures))


_RIGHT, _UP, _LEFT, _DOWN = 1, 2, 4, 8


def _check_rows(rows: list[str], width: int, height: int, base: int, label: str) -> None:
    """Validate one side's hex block; ``base`` is the 0-based header offset."""
    masks: list[list[int]] = []
    for y, row in enumerate(rows):
        line_no = base + y + 1
        if len(row) != width:
            raise MazeFileError(line_no, f"{label}-side row has {len(row)} cells, expected {width}")
        try:
            masks.append([int(c, 16) for c in row])
        except ValueError:
            raise MazeFileError(line_no, f"{label}-side row has a non-hex digit") from None
    for y in range(height):
        line_no = base + y + 1
        for x in range(width):
            m = masks[y][x]
            if x == 0 and not m & _LEFT:
                raise MazeFileError(line_no, f"{label}-side open left border at ({x}, {y})")
            if x == width - 1 and not m & _RIGHT:
                raise MazeFileError(line_no, f"{label}-side open right border at ({x}, {y})")
            if y == 0 and not m & _UP:
                raise MazeFileError(line_no, f"{label}-side open top border at ({x}, {y})")
            if y == height - 1 and not m & _DOWN:
                raise MazeFileError(line_no, f"{label}-side open bottom border at ({x}, {y})")
            if x + 1 < width and bool(m & _RIGHT) != bool(masks[y][x + 1] & _LEFT):
                raise MazeFileError(
                    line_no, f"{label}-side wall mismatch between ({x}, {y}) and ({x + 1}, {y})"
                )
            if y + 1 < height and bool(m & _DOWN) != bool(masks[y + 1][x] & _UP):
                raise MazeFileError(
                    line_no, f"{label}-side wall mismatch between ({x}, {y}) and ({x}, {y + 1})"
                )


def _parse_cell(parts: list[str], width: int, height: int, line_no: int) -> Cell:
    if len(parts) < 2:
        raise MazeFileError(line_no, "expected <x> <y>")
    try:
        x, y = int(parts[0]), int(parts[1])
    except ValueError:
        raise MazeFileError(line_no, "coordinates must be integers") from None
    if not (0 <= x < width and 0 <= y < height):
        raise MazeFileError(line_no, f"cell ({x}, {y}) outside {width}x{height} grid")
    return Cell(x, y)
