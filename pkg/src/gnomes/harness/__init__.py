"""Self-play harness: proxy partners, episode orchestration, experiments."""

from gnomes.harness.episode import TURN_CAP, Condition, final_token, run_episode, run_game
from gnomes.harness.experiment import (
    PROXY_VARIANTS,
    RECOMMENDED_ITERATIONS,
    CellStats,
    ExperimentConfig,
    ExperimentResult,
    GameRecord,
    PairedRoundDiff,
    StatsTable,
    bootstrap_median_ci,
    build_stats,
    derive_seed,
    quick_config,
    run_experiment,
)
from gnomes.harness.heatmap import HeatmapReport, canonical_edge, emit_heatmap, interior_walls
from gnomes.harness.proxies import (
    GreedyFlagging,
    HumanProxy,
    ProxyMove,
    RandomCompliant,
    SilentGreedy,
)

__all__ = [
    "PROXY_VARIANTS",
    "RECOMMENDED_ITERATIONS",
    "TURN_CAP",
    "CellStats",
    "Condition",
    "ExperimentConfig",
    "ExperimentResult",
    "GameRecord",
    "GreedyFlagging",
    "HeatmapReport",
    "HumanProxy",
    "PairedRoundDiff",
    "ProxyMove",
    "RandomCompliant",
    "SilentGreedy",
    "StatsTable",
    "bootstrap_median_ci",
    "build_stats",
    "canonical_edge",
    "derive_seed",
    "emit_heatmap",
    "final_token",
    "interior_walls",
    "quick_config",
    "run_episode",
    "run_game",
]
