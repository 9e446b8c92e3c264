import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gnomes.core import (
    Cell,
    Direction,
    MazeSide,
    MoveOutcome,
    MOVES,
    Player,
    RejectedMove,
    RewardSpec,
    apply,
    is_final,
    reward,
    valid_actions,
)

from conftest import make_state, walls


class TestDirection:
    def test_deltas_follow_screen_coordinates(self):
        # y grows downward, so UP decreases y.
        assert (Direction.RIGHT.dx, Direction.RIGHT.dy) == (1, 0)
        assert (Direction.UP.dx, Direction.UP.dy) == (0, -1)
        assert (Direction.LEFT.dx, Direction.LEFT.dy) == (-1, 0)
        assert (Direction.DOWN.dx, Direction.DOWN.dy) == (0, 1)
        assert (Direction.NOOP.dx, Direction.NOOP.dy) == (0, 0)

    def test_opposites(self):
        assert Direction.RIGHT.opposite is Direction.LEFT
        assert Direction.UP.opposite is Direction.DOWN
        assert Direction.NOOP.opposite is Direction.NOOP

    def test_wall_bits(self):
        assert Direction.RIGHT.bit == 1
        assert Direction.UP.bit == 2
        assert Direction.LEFT.bit == 4
        assert Direction.DOWN.bit == 8
        with pytest.raises(ValueError):
            Direction.NOOP.bit

    def test_word_round_trip(self):
        for d in Direction:
            assert Direction.from_word(d.word) is d
        with pytest.raises(ValueError):
            Direction.from_word("sideways")


class TestMazeSide:
    def test_build_adds_mirror_and_border(self):
        side = MazeSide.build(3, 3, walls((0, 0, "right")))
        assert side.blocked(Cell(0, 0), Direction.RIGHT)
        assert side.blocked(Cell(1, 0), Direction.LEFT)
        assert side.blocked(Cell(0, 0), Direction.LEFT)  # border
        assert side.blocked(Cell(2, 2), Direction.DOWN)  # border
        assert not side.blocked(Cell(1, 1), Direction.UP)

    def test_constructor_rejects_asymmetric_walls(self):
        border = MazeSide.open_grid(2, 2).walls
        lopsided = frozenset(border | {(Cell(0, 0), Direction.RIGHT)})
        with pytest.raises(ValueError, match="asymmetric"):
            MazeSide(2, 2, lopsided)

    def test_constructor_rejects_open_border(self):
        side = MazeSide.open_grid(2, 2)
        missing = frozenset(w for w in side.walls if w != (Cell(0, 0), Direction.UP))
        with pytest.raises(ValueError, match="open boundary"):
            MazeSide(2, 2, missing)

    def test_bitmask_rows_round_trip(self):
        side = MazeSide.build(3, 2, walls((0, 0, "right"), (1, 0, "down")))
        rows = side.to_bitmask_rows()
        assert len(rows) == 2 and all(len(r) == 3 for r in rows)
        again = MazeSide.from_bitmask_rows(3, 2, rows)
        assert again == side

    @given(st.integers(1, 5), st.integers(1, 5), st.data())
    @settings(max_examples=60, deadline=None)
    def test_build_always_satisfies_invariants(self, w, h, data):
        pairs = data.draw(
            st.lists(
                st.tuples(
                    st.integers(0, w - 1),
                    st.integers(0, h - 1),
                    st.sampled_from([d.word for d in MOVES]),
                ),
                max_size=12,
            )
        )
        side = MazeSide.build(w, h, walls(*pairs))
        # construction re-validates symmetry and closure; check actions too
        for y in range(h):
            for x in range(w):
                acts = valid_actions(side, Cell(x, y))
                assert Direction.NOOP in acts
                for d in acts:
                    if d is not Direction.NOOP:
                        assert side.in_grid(Cell(x, y).step(d))


class TestValidActions:
    def test_open_center_has_all_five(self):
        side = MazeSide.open_grid(3, 3)
        assert valid_actions(side, Cell(1, 1)) == set(Direction)

    def test_walled_corner_keeps_noop(self):
        side = MazeSide.build(3, 3, walls((0, 0, "right"), (0, 0, "down")))
        assert valid_actions(side, Cell(0, 0)) == {Direction.NOOP}

    def test_out_of_grid_cell_rejected(self):
        side = MazeSide.open_grid(3, 3)
        with pytest.raises(ValueError):
            valid_actions(side, Cell(3, 0))


class TestApply:
    def test_move_updates_token_control_turn(self, open2x2):
        state = make_state(token=(0, 0), in_control=Player.H, turn=0)
        nxt = apply(open2x2, state, Direction.RIGHT)
        assert nxt.token == Cell(1, 0)
        assert nxt.in_control is Player.E
        assert nxt.turn == 1
        # treasure metadata rides along unchanged
        assert nxt.treasure == state.treasure and nxt.round_no == state.round_no

    def test_noop_consumes_turn_in_place(self, open2x2):
        state = make_state(token=(1, 1), in_control=Player.E, turn=3)
        nxt = apply(open2x2, state, Direction.NOOP)
        assert nxt.token == Cell(1, 1)
        assert nxt.in_control is Player.H
        assert nxt.turn == 4

    def test_blocked_move_raises_with_wall_details(self):
        side = MazeSide.build(2, 2, walls((0, 0, "right")))
        state = make_state(token=(0, 0))
        with pytest.raises(RejectedMove) as err:
            apply(side, state, Direction.RIGHT)
        assert err.value.cell == Cell(0, 0)
        assert err.value.direction is Direction.RIGHT

    def test_border_move_raises(self, open2x2):
        with pytest.raises(RejectedMove):
            apply(open2x2, make_state(token=(0, 0)), Direction.UP)

    @given(st.integers(0, 2), st.integers(0, 2), st.sampled_from(list(Direction)))
    @settings(max_examples=60, deadline=None)
    def test_apply_stays_in_grid_and_alternates(self, x, y, action):
        side = MazeSide.open_grid(3, 3)
        state = make_state(token=(x, y), in_control=Player.H, treasure=(2, 2))
        try:
            nxt = apply(side, state, action)
        except RejectedMove:
            assert side.blocked(Cell(x, y), action)
            return
        assert side.in_grid(nxt.token)
        assert nxt.in_control is state.in_control.other
        assert nxt.turn == state.turn + 1


class TestReward:
    def test_defaults(self):
        spec = RewardSpec()
        assert spec.goal_reward == 1.0
        assert spec.step_penalty == -0.01
        assert spec.wall_penalty == -0.05

    def test_outcome_table(self):
        spec = RewardSpec()
        state = make_state()
        assert reward(spec, state, Direction.RIGHT, MoveOutcome.REACHED_GOAL) == 1.0
        assert reward(spec, state, Direction.NOOP, MoveOutcome.MOVED) == -0.01
        blocked = reward(spec, state, Direction.UP, MoveOutcome.BLOCKED)
        assert blocked == spec.wall_penalty + spec.step_penalty
        assert blocked == pytest.approx(-0.06)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            RewardSpec(goal_reward=0.0)
        with pytest.raises(ValueError):
            RewardSpec(step_penalty=0.5)


class TestIsFinal:
    def test_token_on_treasure(self):
        assert is_final(make_state(token=(1, 1), treasure=(1, 1)))
        assert not is_final(make_state(token=(0, 0), treasure=(1, 1)))


def test_game_state_is_immutable():
    state = make_state()
    with pytest.raises(dataclasses.FrozenInstanceError):
        state.turn = 5
