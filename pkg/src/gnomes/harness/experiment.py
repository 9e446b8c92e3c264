"""Batch self-play runs and their summary statistics.

A run sweeps maze seeds crossed with agent conditions.  Each maze/condition
pair gets its own planner memory, refusal map, and derived RNG seeds, so
runs are reproducible from the master seed alone and episodes stay
independent.
"""

from __future__ import annotations

import hashlib
import statistics
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from gnomes.core.episode import EpisodeLog
from gnomes.core.mazefile import dumps_maze
from gnomes.core.mazegen import MazeSetup, generate_setup
from gnomes.core.types import RewardSpec
from gnomes.harness.episode import TURN_CAP, Condition, run_game
from gnomes.harness.proxies import GreedyFlagging, HumanProxy, RandomCompliant, SilentGreedy
from gnomes.planner import HiddenInfo, PlannerConfig, PlannerMemory

PROXY_VARIANTS: dict[str, type[HumanProxy]] = {
    "greedy-flagging": GreedyFlagging,
    "random-compliant": RandomCompliant,
    "silent-greedy": SilentGreedy,
}

#: Iteration budget for experiments.  Divisible by every possible count of
#: valid moves (1..5): when the treasure is hidden from the agent all moves
#: score identically, the balanced search then ties child visits exactly,
#: and the partner's flag gets to break the tie.  A budget that leaves a
#: remainder elects a random visit leader instead and guidance is ignored.
RECOMMENDED_ITERATIONS = 120


def derive_seed(*parts: Any) -> int:
    """Stable 64-bit seed from a label path; keeps RNG streams isolated."""
    text = "/".join(str(p) for p in parts)
    return int.from_bytes(hashlib.blake2s(text.encode(), digest_size=8).digest(), "big")


@dataclass(frozen=True)
class ExperimentConfig:
    maze_seeds: tuple[int, ...]
    conditions: tuple[Condition, ...] = (Condition.COMM, Condition.MUTE)
    proxy_variant: str = "greedy-flagging"
    error_rate: float = 0.0
    width: int = 9
    height: int = 9
    rounds: int = 5
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    rewards: RewardSpec = field(default_factory=RewardSpec)
    turn_cap: int = TURN_CAP
    master_seed: int = 0
    bootstrap_resamples: int = 10_000

    def __post_init__(self) -> None:
        if not self.maze_seeds:
            raise ValueError("need at least one maze seed")
        if not self.conditions:
            raise ValueError("need at least one condition")
        if self.proxy_variant not in PROXY_VARIANTS:
            raise ValueError(f"unknown proxy variant {self.proxy_variant!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "maze_seeds": list(self.maze_seeds),
            "conditions": [c.value for c in self.conditions],
            "proxy_variant": self.proxy_variant,
            "error_rate": self.error_rate,
            "width": self.width,
            "height": self.height,
            "rounds": self.rounds,
            "iterations": self.planner.iterations,
            "turn_cap": self.turn_cap,
            "master_seed": self.master_seed,
            "bootstrap_resamples": self.bootstrap_resamples,
        }


@dataclass
class GameRecord:
    """One maze played under one condition, with the final refusal map."""

    maze_seed: int
    condition: Condition
    maze_text: str
    logs: list[EpisodeLog]
    omega: HiddenInfo

    def to_dict(self) -> dict[str, Any]:
        return {
            "maze_seed": self.maze_seed,
            "condition": self.condition.value,
            "maze": self.maze_text,
            "omega": self.omega.to_dict(),
            "rounds": [log.to_dict() for log in self.logs],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GameRecord":
        return cls(
            maze_seed=data["maze_seed"],
            condition=Condition(data["condition"]),
            maze_text=data["maze"],
            logs=[EpisodeLog.from_dict(raw) for raw in data["rounds"]],
            omega=HiddenInfo.from_dict(data["omega"]),
        )


@dataclass(frozen=True)
class CellStats:
    """Aggregates for one (round, condition); medians over solved episodes."""

    round_no: int
    condition: str
    episodes: int
    solved: int
    median_turns: float | None
    turns_ci_low: float | None
    turns_ci_high: float | None
    median_duration_s: float | None
    mean_messages: float
    mean_message_chars: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "round": self.round_no,
            "condition": self.condition,
            "episodes": self.episodes,
            "solved": self.solved,
            "median_turns": self.median_turns,
            "turns_ci": [self.turns_ci_low, self.turns_ci_high],
            "median_duration_s": self.median_duration_s,
            "mean_messages": self.mean_messages,
            "mean_message_chars": self.mean_message_chars,
        }


@dataclass(frozen=True)
class PairedRoundDiff:
    """Per-round paired turn difference, mute minus comm (positive favors comm)."""

    round_no: int
    pairs: int
    median_diff: float | None
    ci_low: float | None
    ci_high: float | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "round": self.round_no,
            "pairs": self.pairs,
            "median_diff_turns": self.median_diff,
            "ci": [self.ci_low, self.ci_high],
        }


@dataclass(frozen=True)
class StatsTable:
    cells: tuple[CellStats, ...]
    paired: tuple[PairedRoundDiff, ...]
    master_seed: int
    resamples: int

    def cell(self, round_no: int, condition: Condition) -> CellStats:
        for c in self.cells:
            if c.round_no == round_no and c.condition == condition.value:
                return c
        raise KeyError((round_no, condition))

    def paired_for(self, round_no: int) -> PairedRoundDiff:
        for p in self.paired:
            if p.round_no == round_no:
                return p
        raise KeyError(round_no)

    def to_dict(self) -> dict[str, Any]:
        return {
            "v": 1,
            "kind": "stats-table",
            "master_seed": self.master_seed,
            "bootstrap_resamples": self.resamples,
            "cells": [c.to_dict() for c in self.cells],
            "paired_mute_minus_comm": [p.to_dict() for p in self.paired],
        }

    def render_csv(self) -> str:
        rows = [
            "round,condition,episodes,solved,median_turns,turns_ci_low,turns_ci_high,"
            "median_duration_s,mean_messages,mean_message_chars"
        ]
        for c in self.cells:
            rows.append(
                f"{c.round_no},{c.condition},{c.episodes},{c.solved},"
                f"{_num(c.median_turns)},{_num(c.turns_ci_low)},{_num(c.turns_ci_high)},"
                f"{_num(c.median_duration_s)},{c.mean_messages:.2f},{c.mean_message_chars:.1f}"
            )
        return "\n".join(rows) + "\n"

    def render_markdown(self) -> str:
        lines = [
            "| round | condition | episodes | solved | median turns | 95% CI | "
            "median duration (s) | msgs/episode | chars/msg |",
            "|---|---|---|---|---|---|---|---|---|",
        ]
        for c in self.cells:
            ci = f"[{_num(c.turns_ci_low)}, {_num(c.turns_ci_high)}]"
            lines.append(
                f"| {c.round_no} | {c.condition} | {c.episodes} | {c.solved} "
                f"| {_num(c.median_turns)} | {ci} | {_num(c.median_duration_s)} "
                f"| {c.mean_messages:.2f} | {c.mean_message_chars:.1f} |"
            )
        if self.paired:
            lines += [
                "",
                "| round | pairs | median turn diff (mute - comm) | 95% CI |",
                "|---|---|---|---|",
            ]
            for p in self.paired:
                ci = f"[{_num(p.ci_low)}, {_num(p.ci_high)}]"
                lines.append(f"| {p.round_no} | {p.pairs} | {_num(p.median_diff)} | {ci} |")
        return "\n".join(lines) + "\n"


def _num(value: float | None) -> str:
    if value is None:
        return "-"
    return f"{value:.4g}"


def bootstrap_median_ci(
    values: list[float], resamples: int, seed: int, alpha: float = 0.05
) -> tuple[float, float] | None:
    """Percentile bootstrap CI for the median; values are sorted first so
    the interval does not depend on episode order."""
    if not values:
        return None
    data = np.sort(np.asarray(values, dtype=float))
    if data.size == 1:
        return (float(data[0]), float(data[0]))
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, data.size, size=(resamples, data.size))
    medians = np.median(data[picks], axis=1)
    return (
        float(np.quantile(medians, alpha / 2)),
        float(np.quantile(medians, 1 - alpha / 2)),
    )


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[GameRecord]

    def stats(self) -> StatsTable:
        return build_stats(
            self.records,
            master_seed=self.config.master_seed,
            resamples=self.config.bootstrap_resamples,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "v": 1,
            "kind": "experiment-results",
            "master_seed": self.config.master_seed,
            "config": self.config.to_dict(),
            "games": [r.to_dict() for r in self.records],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentResult":
        raw = data["config"]
        config = ExperimentConfig(
            maze_seeds=tuple(raw["maze_seeds"]),
            conditions=tuple(Condition(c) for c in raw["conditions"]),
            proxy_variant=raw["proxy_variant"],
            error_rate=raw["error_rate"],
            width=raw["width"],
            height=raw["height"],
            rounds=raw["rounds"],
            planner=PlannerConfig(iterations=raw["iterations"]),
            turn_cap=raw["turn_cap"],
            master_seed=raw["master_seed"],
            bootstrap_resamples=raw["bootstrap_resamples"],
        )
        return cls(config, [GameRecord.from_dict(g) for g in data["games"]])


def run_experiment(
    config: ExperimentConfig,
    *,
    setup_override: MazeSetup | None = None,
    progress: Callable[[str], None] | None = None,
) -> ExperimentResult:
    """Every (maze seed x condition) game, sequentially and deterministically.

    ``setup_override`` pins one fixed board for all seeds (seeds then only
    vary the RNG streams), used when replaying a maze file.
    """
    records: list[GameRecord] = []
    proxy_cls = PROXY_VARIANTS[config.proxy_variant]
    for maze_seed in config.maze_seeds:
        if setup_override is not None:
            setup = setup_override
        else:
            setup = generate_setup(
                derive_seed(config.master_seed, "maze", maze_seed),
                config.width,
                config.height,
                rounds=config.rounds,
            )
        maze_text = dumps_maze(setup)
        for condition in config.conditions:
            memory = PlannerMemory(
                rng_seed=derive_seed(config.master_seed, maze_seed, condition.value, "planner")
            )
            proxy = _build_proxy(proxy_cls, setup, config, maze_seed, condition)
            logs = run_game(
                setup,
                memory,
                proxy,
                condition=condition,
                config=config.planner,
                rewards=config.rewards,
                turn_cap=config.turn_cap,
            )
            records.append(GameRecord(maze_seed, condition, maze_text, logs, memory.omega))
            if progress is not None:
                solved = sum(1 for log in logs if log.solved)
                progress(
                    f"seed {maze_seed} {condition.value}: "
                    f"{solved}/{len(logs)} rounds solved"
                )
    return ExperimentResult(config, records)


def _build_proxy(
    proxy_cls: type[HumanProxy],
    setup: MazeSetup,
    config: ExperimentConfig,
    maze_seed: int,
    condition: Condition,
) -> HumanProxy:
    seed = derive_seed(config.master_seed, maze_seed, condition.value, "proxy")
    if proxy_cls is GreedyFlagging:
        return GreedyFlagging(setup.side_h, seed, error_rate=config.error_rate)
    return proxy_cls(setup.side_h, seed)


def build_stats(records: list[GameRecord], *, master_seed: int, resamples: int) -> StatsTable:
    by_cell: dict[tuple[int, str], list[EpisodeLog]] = {}
    for record in records:
        for log in record.logs:
            by_cell.setdefault((log.round_no, record.condition.value), []).append(log)

    cells = []
    for (round_no, condition) in sorted(by_cell):
        logs = by_cell[(round_no, condition)]
        solved = [log for log in logs if log.solved]
        turns = sorted(log.turns for log in solved)
        ci = bootstrap_median_ci(
            [float(t) for t in turns],
            resamples,
            derive_seed(master_seed, "ci", round_no, condition),
        )
        message_counts = []
        message_chars = []
        for log in logs:
            sent = [e.message_out for e in log.entries if e.message_out]
            message_counts.append(len(sent))
            message_chars.extend(len(m) for m in sent)
        cells.append(
            CellStats(
                round_no=round_no,
                condition=condition,
                episodes=len(logs),
                solved=len(solved),
                median_turns=statistics.median(turns) if turns else None,
                turns_ci_low=ci[0] if ci else None,
                turns_ci_high=ci[1] if ci else None,
                median_duration_s=(
                    statistics.median(sorted(log.duration_s for log in solved)) if solved else None
                ),
                mean_messages=statistics.mean(message_counts) if message_counts else 0.0,
                mean_message_chars=statistics.mean(message_chars) if message_chars else 0.0,
            )
        )

    paired = _paired_diffs(records, master_seed=master_seed, resamples=resamples)
    return StatsTable(tuple(cells), tuple(paired), master_seed, resamples)


def _paired_diffs(
    records: list[GameRecord], *, master_seed: int, resamples: int
) -> list[PairedRoundDiff]:
    """Mute-minus-comm turn differences, paired by maze seed and round."""
    turns: dict[tuple[int, int, str], int] = {}
    rounds: set[int] = set()
    for record in records:
        for log in record.logs:
            if log.solved:
                turns[(record.maze_seed, log.round_no, record.condition.value)] = log.turns
            rounds.add(log.round_no)
    seeds = sorted({record.maze_seed for record in records})

    out = []
    for round_no in sorted(rounds):
        diffs = []
        for maze_seed in seeds:
            comm = turns.get((maze_seed, round_no, Condition.COMM.value))
            mute = turns.get((maze_seed, round_no, Condition.MUTE.value))
            if comm is not None and mute is not None:
                diffs.append(float(mute - comm))
        ci = bootstrap_median_ci(
            diffs, resamples, derive_seed(master_seed, "paired-ci", round_no)
        )
        out.append(
            PairedRoundDiff(
                round_no=round_no,
                pairs=len(diffs),
                median_diff=statistics.median(sorted(diffs)) if diffs else None,
                ci_low=ci[0] if ci else None,
                ci_high=ci[1] if ci else None,
            )
        )
    return out


def quick_config(
    seeds: int,
    *,
    conditions: tuple[Condition, ...] = (Condition.COMM, Condition.MUTE),
    master_seed: int = 0,
    **overrides: Any,
) -> ExperimentConfig:
    """Config over ``seeds`` consecutive maze seeds starting at zero."""
    return ExperimentConfig(
        maze_seeds=tuple(range(seeds)),
        conditions=conditions,
        master_seed=master_seed,
        **overrides,
    )
