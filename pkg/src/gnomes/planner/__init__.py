from gnomes.planner.dump import dump_tree
from gnomes.planner.game import NO_GOAL, PlannerGame
from gnomes.planner.memory import HiddenInfo, PlannerConfig, PlannerMemory
from gnomes.planner.node import SearchNode
from gnomes.planner.search import PlanError, PlanResult, plan, plan_result, ucb

__all__ = [
    "HiddenInfo",
    "NO_GOAL",
    "PlanError",
    "PlanResult",
    "PlannerConfig",
    "PlannerGame",
    "PlannerMemory",
    "SearchNode",
    "dump_tree",
    "plan",
    "plan_result",
    "ucb",
]
