import pytest

from gnomes.core import Cell, Direction, GameState, MazeSide, Player


def make_state(
    token=(0, 0),
    in_control=Player.H,
    turn=0,
    treasure=(1, 1),
    treasure_side=Player.H,
    round_no=1,
) -> GameState:
    return GameState(
        token=Cell(*token),
        in_control=in_control,
        turn=turn,
        treasure=Cell(*treasure),
        treasure_side=treasure_side,
        round_no=round_no,
    )


def walls(*specs) -> list[tuple[Cell, Direction]]:
    """Shorthand: walls((x, y, "right"), ...) -> [(Cell, Direction), ...]."""
    return [(Cell(x, y), Direction.from_word(d)) for x, y, d in specs]


@pytest.fixture
def open2x2() -> MazeSide:
    return MazeSide.open_grid(2, 2)
