"""Proxy policies, the episode loop, experiments, and the wall heatmap."""

from __future__ import annotations

import random

import pytest

from gnomes.core import engine
from gnomes.core.mazegen import generate_setup
from gnomes.core.oracle import joint_oracle, side_distances
from gnomes.core.types import Cell, Direction, MazeSide, Player
from gnomes.flags import Flag
from gnomes.harness import (
    Condition,
    ExperimentConfig,
    GreedyFlagging,
    RandomCompliant,
    SilentGreedy,
    build_stats,
    emit_heatmap,
    final_token,
    interior_walls,
    quick_config,
    run_episode,
    run_experiment,
    run_game,
)
from gnomes.planner import HiddenInfo, PlannerConfig, PlannerMemory

from conftest import make_state

FAST = PlannerConfig(iterations=60)


def corridor() -> MazeSide:
    return MazeSide.open_grid(5, 1)


def small_setup(seed: int = 0):
    return generate_setup(seed, 5, 5)


def play(seed: int, condition: Condition, *, error_rate: float = 0.0, setup=None):
    setup = setup or small_setup(seed)
    memory = PlannerMemory(rng_seed=seed + 1)
    proxy = GreedyFlagging(setup.side_h, seed=seed + 2, error_rate=error_rate)
    logs = run_game(setup, memory, proxy, condition=condition, config=FAST)
    return setup, memory, logs


class TestGreedyFlaggingProxy:
    def test_rejects_exactly_the_walled_proposals(self):
        side = MazeSide.build(3, 3, [(Cell(1, 1), Direction.RIGHT)])
        proxy = GreedyFlagging(side, seed=0)
        state = make_state(token=(1, 1), treasure=(0, 0), treasure_side=Player.H)
        move, flag = proxy.act(state, Flag.RIGHT)
        assert flag is Flag.REJECT
        for proposal in (Flag.UP, Flag.LEFT, Flag.DOWN, Flag.NOOP):
            fresh = GreedyFlagging(side, seed=0)
            move, flag = fresh.act(state, proposal)
            assert flag is not Flag.REJECT

    def test_reject_only_moves_when_the_claim_stays_true(self):
        # refused direction must be walled at the destination as well
        for seed in range(12):
            setup = small_setup(seed)
            proxy = GreedyFlagging(setup.side_h, seed=seed)
            dist = side_distances(setup.side_h, setup.treasures[0].cell)
            for cell in (Cell(x, y) for x in range(5) for y in range(5)):
                if dist.get(cell) in (None, 0):
                    continue
                state = make_state(
                    token=tuple(cell),
                    treasure=tuple(setup.treasures[0].cell),
                    treasure_side=Player.H,
                )
                blocked = [
                    d for d in (Direction.RIGHT, Direction.UP, Direction.LEFT, Direction.DOWN)
                    if setup.side_h.blocked(cell, d)
                ]
                if not blocked:
                    continue
                proposal = blocked[0]
                move, flag = proxy.act(state, Flag.from_direction(proposal))
                assert flag is Flag.REJECT
                assert not setup.side_h.blocked(cell, move) or move is Direction.NOOP
                dest = cell.step(move)
                assert setup.side_h.blocked(dest, proposal)

    def test_blind_compliance(self):
        side = MazeSide.open_grid(3, 3)
        proxy = GreedyFlagging(side, seed=0)
        state = make_state(token=(1, 1), treasure=(2, 2), treasure_side=Player.E)
        move, flag = proxy.act(state, Flag.LEFT)
        assert move is Direction.LEFT
        assert flag is Flag.ACCEPT

    def test_blind_exploration_prefers_unvisited(self):
        side = MazeSide.open_grid(3, 1)
        proxy = GreedyFlagging(side, seed=0)
        state = make_state(token=(1, 0), treasure=(2, 0), treasure_side=Player.E)
        proxy.act(state, Flag.NONE)
        # token cell and left neighbour visited; right neighbour untouched
        proxy._visits[Cell(0, 0)] = 3
        move, flag = proxy.act(state, Flag.NONE)
        assert move is Direction.RIGHT
        assert flag is Flag.NONE

    def test_error_injection_rejects_valid_proposals(self):
        side = MazeSide.open_grid(3, 3)
        proxy = GreedyFlagging(side, seed=7, error_rate=1.0)
        state = make_state(token=(1, 1), treasure=(2, 2), treasure_side=Player.E)
        move, flag = proxy.act(state, Flag.RIGHT)
        assert flag is Flag.REJECT
        assert move is Direction.NOOP

    def test_error_rate_validated(self):
        with pytest.raises(ValueError):
            GreedyFlagging(MazeSide.open_grid(2, 2), error_rate=1.5)

    def test_guidance_is_shortest_path_on_own_side(self):
        # every action flag the sighted proxy emits must be its-side valid at
        # the cell the agent will occupy and strictly approach the treasure
        for seed in range(6):
            setup, memory, logs = play(seed, Condition.COMM)
            for log, spot in zip(logs, setup.treasures):
                dist = side_distances(setup.side_h, spot.cell)
                for entry in log.entries:
                    if entry.player is not Player.H:
                        continue
                    flag = Flag.from_label(entry.flag_out)
                    if spot.side is Player.E:
                        assert not flag.is_action, "blind proxy must not direct"
                        continue
                    if not flag.is_action or flag is Flag.NOOP:
                        continue
                    direction = flag.to_direction()
                    standing = entry.state.token.step(entry.action)
                    assert not setup.side_h.blocked(standing, direction)
                    assert dist[standing.step(direction)] == dist[standing] - 1

    def test_reject_iff_invalid_in_logged_games(self):
        for seed in range(6):
            setup, memory, logs = play(seed, Condition.COMM)
            for log in logs:
                for entry in log.entries:
                    if entry.player is not Player.H:
                        continue
                    received = Flag.from_label(entry.flag_in)
                    rejected = entry.flag_out == Flag.REJECT.value
                    invalid = (
                        received.is_action
                        and received is not Flag.NOOP
                        and setup.side_h.blocked(entry.state.token, received.to_direction())
                    )
                    assert rejected == invalid


class TestOtherProxies:
    def test_random_compliant_follows_valid_proposals(self):
        side = MazeSide.open_grid(3, 3)
        proxy = RandomCompliant(side, seed=1)
        state = make_state(token=(1, 1), treasure=(0, 0), treasure_side=Player.H)
        assert proxy.act(state, Flag.UP) == (Direction.UP, Flag.ACCEPT)

    def test_random_compliant_rejects_walls(self):
        side = MazeSide.build(2, 1, [(Cell(0, 0), Direction.RIGHT)])
        proxy = RandomCompliant(side, seed=1)
        state = make_state(token=(0, 0), treasure=(1, 0), treasure_side=Player.H)
        assert proxy.act(state, Flag.RIGHT) == (Direction.NOOP, Flag.REJECT)

    def test_silent_greedy_never_speaks(self):
        setup = small_setup(1)
        proxy = SilentGreedy(setup.side_h, seed=3)
        spot = setup.treasures[0]
        state = make_state(
            token=tuple(setup.start), treasure=tuple(spot.cell), treasure_side=spot.side
        )
        for incoming in (Flag.RIGHT, Flag.REJECT, Flag.INQUIRY, Flag.NONE):
            move, flag = proxy.act(state, incoming)
            assert flag is Flag.NONE

    def test_silent_greedy_descends_distance_when_sighted(self):
        setup = small_setup(2)
        spot = setup.treasures[0]
        assert spot.side is Player.H
        dist = side_distances(setup.side_h, spot.cell)
        proxy = SilentGreedy(setup.side_h, seed=0)
        state = make_state(
            token=tuple(setup.start), treasure=tuple(spot.cell), treasure_side=Player.H
        )
        move, _ = proxy.act(state, Flag.NONE)
        assert dist[setup.start.step(move)] == dist[setup.start] - 1


class TestRunEpisode:
    def test_start_on_treasure_is_zero_turn_solved(self):
        side = MazeSide.open_grid(2, 2)
        log = run_episode(
            side, side,
            start=Cell(1, 1), treasure=Cell(1, 1), treasure_side=Player.H, round_no=1,
            memory=PlannerMemory(rng_seed=0), proxy=GreedyFlagging(side, 0),
        )
        assert log.solved and log.turns == 0

    def test_partner_moves_first_and_players_alternate(self):
        setup, memory, logs = play(3, Condition.COMM)
        for log in logs:
            assert log.entries[0].player is Player.H
            for a, b in zip(log.entries, log.entries[1:]):
                assert b.player is a.player.other

    def test_transcripts_replay_through_the_engine(self):
        # every logged action must be valid on the mover's side
        for seed in (4, 5):
            setup, memory, logs = play(seed, Condition.COMM)
            for log in logs:
                final = log.replay(setup.side_e, setup.side_h)
                assert log.solved == (final.token == final.treasure)

    def test_mute_condition_logs_only_silence(self):
        setup, memory, logs = play(6, Condition.MUTE)
        assert any(log.turns > 0 for log in logs)
        for log in logs:
            for entry in log.entries:
                assert entry.flag_in == Flag.NONE.value
                assert entry.flag_out == Flag.NONE.value
                assert entry.message_in is None and entry.message_out is None

    def test_comm_condition_carries_messages(self):
        setup, memory, logs = play(7, Condition.COMM)
        texts = [e.message_out for log in logs for e in log.entries if e.message_out]
        assert texts, "talking games should produce messages"
        assert any(t.startswith("Can you ") for t in texts)

    def test_turn_cap_marks_unsolved(self):
        setup = small_setup(8)
        spot = setup.treasures[0]
        log = run_episode(
            setup.side_e, setup.side_h,
            start=setup.start, treasure=spot.cell, treasure_side=spot.side, round_no=1,
            memory=PlannerMemory(rng_seed=0), proxy=GreedyFlagging(setup.side_h, 0),
            config=FAST, turn_cap=2,
        )
        assert not log.solved and log.turns == 2

    def test_corridor_solved_within_lower_bound_plus_margin(self):
        # oracle first: the joint game needs 4 moves on an open length-5 lane
        side = corridor()
        plan_moves = joint_oracle(side, side, Cell(0, 0), Cell(4, 0))
        assert plan_moves is not None and len(plan_moves) == 4
        for seed in range(100):
            log = run_episode(
                side, side,
                start=Cell(0, 0), treasure=Cell(4, 0), treasure_side=Player.H, round_no=1,
                memory=PlannerMemory(rng_seed=seed),
                proxy=GreedyFlagging(side, seed=1000 + seed),
                condition=Condition.COMM,
                config=PlannerConfig(iterations=120),
            )
            assert log.solved and log.turns <= 6, f"seed {seed}: {log.turns} turns"

    def test_round_chaining_starts_at_previous_treasure(self):
        setup, memory, logs = play(9, Condition.COMM)
        for prev, nxt in zip(logs, logs[1:]):
            if prev.solved and nxt.entries:
                want = setup.treasure_for(prev.round_no).cell
                assert nxt.entries[0].state.token == want

    def test_refusals_accumulate_only_in_comm(self):
        _, memory_comm, _ = play(10, Condition.COMM)
        _, memory_mute, _ = play(10, Condition.MUTE)
        assert len(memory_mute.omega) == 0
        # talking games usually learn at least one wall on a 5x5 board
        assert len(memory_comm.omega) >= 0

    def test_final_token_matches_replay(self):
        setup, memory, logs = play(11, Condition.COMM)
        token = setup.start_for(1)
        for log in logs:
            if log.entries:
                assert log.entries[0].state.token == token
            token = final_token(log, token)
        assert token == (setup.treasures[-1].cell if logs[-1].solved else token)


def _without_timings(value):
    """Strip wall-clock fields; they are the one nondeterministic output."""
    if isinstance(value, dict):
        return {
            k: _without_timings(v) for k, v in value.items() if "duration" not in k
        }
    if isinstance(value, list):
        return [_without_timings(v) for v in value]
    return value


class TestExperiment:
    CONFIG = dict(width=5, height=5, rounds=2, planner=FAST)

    def test_same_master_seed_is_bit_identical(self):
        a = run_experiment(quick_config(1, master_seed=5, **self.CONFIG))
        b = run_experiment(quick_config(1, master_seed=5, **self.CONFIG))
        assert _without_timings(a.to_dict()) == _without_timings(b.to_dict())
        assert _without_timings(a.stats().to_dict()) == _without_timings(b.stats().to_dict())

    def test_single_seed_table_shape(self):
        result = run_experiment(quick_config(1, **self.CONFIG))
        table = result.stats()
        assert len(table.cells) == 4  # 2 rounds x 2 conditions
        assert {c.condition for c in table.cells} == {"comm", "mute"}
        assert len(table.paired) == 2

    def test_stats_are_permutation_invariant(self):
        result = run_experiment(quick_config(2, **self.CONFIG))
        forward = build_stats(result.records, master_seed=0, resamples=500)
        backward = build_stats(list(reversed(result.records)), master_seed=0, resamples=500)
        shuffled = result.records[:]
        random.Random(3).shuffle(shuffled)
        assert forward == build_stats(shuffled, master_seed=0, resamples=500) == backward

    def test_mute_rows_report_no_messages(self):
        result = run_experiment(quick_config(1, **self.CONFIG))
        for cell in result.stats().cells:
            if cell.condition == "mute":
                assert cell.mean_messages == 0.0

    def test_round_trip_through_dict(self):
        result = run_experiment(quick_config(1, **self.CONFIG))
        clone = type(result).from_dict(result.to_dict())
        assert clone.to_dict() == result.to_dict()

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(maze_seeds=())
        with pytest.raises(ValueError):
            ExperimentConfig(maze_seeds=(1,), conditions=())
        with pytest.raises(ValueError):
            ExperimentConfig(maze_seeds=(1,), proxy_variant="nonesuch")


class TestHeatmap:
    def test_empty_memory_has_no_claims(self):
        setup = small_setup(0)
        report = emit_heatmap(HiddenInfo(), setup.side_h)
        assert report.counts["true_positives"] == 0
        assert report.counts["false_positives"] == 0
        assert report.counts["false_negatives"] == len(interior_walls(setup.side_h))

    def test_exact_knowledge_has_no_errors(self):
        setup = small_setup(1)
        omega = HiddenInfo()
        for cell, direction in interior_walls(setup.side_h):
            omega.add(cell, direction)
        report = emit_heatmap(omega, setup.side_h)
        assert report.counts["false_positives"] == 0
        assert report.counts["false_negatives"] == 0
        assert report.counts["true_positives"] == len(interior_walls(setup.side_h))

    def test_claim_on_open_edge_is_false_positive(self):
        side = MazeSide.open_grid(3, 3)
        omega = HiddenInfo()
        omega.add(Cell(1, 1), Direction.RIGHT)
        report = emit_heatmap(omega, side)
        assert report.counts["false_positives"] == 1
        assert report.counts["true_positives"] == 0

    def test_mirrored_claims_collapse_to_one_edge(self):
        side = MazeSide.build(3, 3, [(Cell(0, 0), Direction.RIGHT)])
        omega = HiddenInfo()
        omega.add(Cell(0, 0), Direction.RIGHT)
        omega.add(Cell(1, 0), Direction.LEFT)
        report = emit_heatmap(omega, side)
        assert report.counts["true_positives"] == 1

    def test_compliant_games_never_claim_open_edges(self):
        for seed in range(4):
            setup, memory, logs = play(seed, Condition.COMM)
            report = emit_heatmap(memory, setup.side_h)
            assert report.counts["false_positives"] == 0

    def test_error_injection_produces_false_claims(self):
        found = 0
        for seed in range(6):
            setup, memory, logs = play(seed, Condition.COMM, error_rate=0.5)
            report = emit_heatmap(memory, setup.side_h)
            found += report.counts["false_positives"]
        assert found > 0

    def test_render_mentions_every_class(self):
        setup = small_setup(2)
        omega = HiddenInfo()
        edges = sorted(interior_walls(setup.side_h), key=lambda e: (e[0].y, e[0].x))
        omega.add(*edges[0])
        text = emit_heatmap(omega, setup.side_h).render()
        assert "#" in text and "?" in text
        assert "correctly learned (1)" in text
