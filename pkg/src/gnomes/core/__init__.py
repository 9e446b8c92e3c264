from gnomes.core.engine import RejectedMove, apply, is_final, reward, valid_actions
from gnomes.core.episode import EpisodeEntry, EpisodeLog
from gnomes.core.mazefile import MazeFileError, dumps_maze, load_maze, loads_maze, save_maze
from gnomes.core.mazegen import MazeSetup, RoundTreasure, generate_maze_pair, generate_setup
from gnomes.core.oracle import joint_oracle, side_distances
from gnomes.core.types import (
    Cell,
    Direction,
    GameState,
    MazeSide,
    MoveOutcome,
    MOVES,
    Player,
    RewardSpec,
    Wall,
)

__all__ = [
    "Cell",
    "Direction",
    "EpisodeEntry",
    "EpisodeLog",
    "GameState",
    "MazeFileError",
    "MazeSetup",
    "MazeSide",
    "MoveOutcome",
    "MOVES",
    "Player",
    "RejectedMove",
    "RewardSpec",
    "RoundTreasure",
    "Wall",
    "apply",
    "dumps_maze",
    "generate_maze_pair",
    "generate_setup",
    "is_final",
    "joint_oracle",
    "load_maze",
    "loads_maze",
    "reward",
    "save_maze",
    "side_distances",
    "valid_actions",
]
