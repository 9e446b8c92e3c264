"""Flag-aware Monte Carlo tree search over two perspective trees.

Every decision builds two fresh trees over the same action walk, one per
seat.  Each iteration walks the game forward: the seat in control picks the
step (untried first, then best UCB, then uniform once the walk leaves the
tree), both cursors descend, and at most one new node enters each tree.
The walk stops at the goal, or at the step cap when the goal is unknown or
out of reach; the undiscounted return backs up both cursor paths.

The final choice reads the agent tree only and folds in the partner's
flag: an Inquiry is echoed for the chat layer to answer, a Reject files
the previously proposed move as refused at the current cell, an
unsatisfiable request is answered with a Reject, and a satisfiable one
breaks ties among the most-visited actions.  The outgoing flag proposes
the partner's follow-up: the most-visited grandchild move not yet refused
at the chosen node's cell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import log, sqrt

from gnomes.core.engine import is_final
from gnomes.core.types import Direction, GameState, Player
from gnomes.flags import Flag
from gnomes.planner.game import NO_GOAL, PlannerGame
from gnomes.planner.memory import PlannerConfig, PlannerMemory
from gnomes.planner.node import SearchNode

AGENT, PARTNER = 0, 1


class PlanError(Exception):
    """No decision can be made from this state."""


@dataclass(frozen=True)
class PlanResult:
    """A decision plus the finished perspective trees, for inspection."""

    action: Direction
    f_out: Flag
    root_e: SearchNode
    root_h: SearchNode


def ucb(node: SearchNode, exploration: float) -> float:
    """Mean return plus the exploration bonus against the parent's visits."""
    if node.visits < 1:
        raise PlanError("UCB on an unvisited node")
    if node.parent is None or node.parent.visits < 1:
        raise PlanError("UCB needs a visited parent")
    mean = node.total / node.visits
    return mean + exploration * sqrt(log(node.parent.visits) / node.visits)


def plan(
    state: GameState,
    f_in: Flag,
    memory: PlannerMemory,
    game: PlannerGame,
    config: PlannerConfig = PlannerConfig(),
) -> tuple[Direction, Flag]:
    """One agent decision: the move to apply and the flag to send.

    Side effects on ``memory``: a Reject in ``f_in`` extends the refusal
    map, and ``last_flag`` always becomes the returned flag.
    """
    result = plan_result(state, f_in, memory, game, config)
    return result.action, result.f_out


def plan_result(
    state: GameState,
    f_in: Flag,
    memory: PlannerMemory,
    game: PlannerGame,
    config: PlannerConfig = PlannerConfig(),
) -> PlanResult:
    """Like :func:`plan` but keeps the search trees for inspection."""
    if is_final(state):
        raise PlanError("round already solved; nothing to plan")
    if state.in_control is not Player.E:
        raise PlanError("planning is only defined on the agent's turn")

    root_cell = game.index(state.token)
    root_e = SearchNode(None, -1, root_cell, AGENT)
    root_h = SearchNode(None, -1, root_cell, AGENT)

    rng = memory.rng
    own_moves = game.own_moves
    partner_moves = game.partner_moves(memory.omega)
    next_cell = game.next_cell
    goal = game.goal
    goal_reward = game.goal_reward
    step_penalty = game.step_penalty
    cap = config.cap_for(game.width, game.height)
    exploration = config.exploration
    randrange = rng.randrange

    for _ in range(config.iterations):
        v_e, v_h = root_e, root_h
        on_rollout = False
        mover = AGENT
        s = root_cell
        ret = 0.0
        steps = 0
        while s != goal and steps < cap:
            moves = own_moves[s] if mover == AGENT else partner_moves[s]
            if on_rollout:
                a = moves[randrange(len(moves))]
            else:
                v = v_e if mover == AGENT else v_h
                if v.untried is None:
                    v.untried = list(moves)
                    rng.shuffle(v.untried)
                if v.untried:
                    a = v.untried.pop()
                else:
                    a = _best_ucb_action(v, exploration, rng)
            s2 = next_cell[s][a] if a else s
            ret += goal_reward if s2 == goal else step_penalty
            nxt_mover = 1 - mover
            # Both cursors act on the flag as read at the start of the step;
            # otherwise one tree could drain untried actions it never gets
            # children for, stranding selection at a childless node.
            was_rollout = on_rollout
            v_e, created_e = _find_or_create_child(v_e, a, s2, nxt_mover, was_rollout)
            v_h, created_h = _find_or_create_child(v_h, a, s2, nxt_mover, was_rollout)
            on_rollout = was_rollout or created_e or created_h
            s = s2
            mover = nxt_mover
            steps += 1
        _backpropagate(v_e, ret)
        _backpropagate(v_h, ret)

    action, f_out = _select_best_action(root_e, f_in, memory, game)
    return PlanResult(action, f_out, root_e, root_h)


def _best_ucb_action(v: SearchNode, exploration: float, rng) -> int:
    log_n = log(v.visits)
    best_value = None
    ties: list[int] = []
    for a, child in v.children.items():
        value = child.total / child.visits + exploration * sqrt(log_n / child.visits)
        if best_value is None or value > best_value:
            best_value = value
            ties = [a]
        elif value == best_value:
            ties.append(a)
    if not ties:
        raise PlanError("selection reached a childless expanded node")
    return ties[0] if len(ties) == 1 else ties[rng.randrange(len(ties))]


def _find_or_create_child(
    v: SearchNode, action: int, cell: int, mover: int, on_rollout: bool
) -> tuple[SearchNode, bool]:
    """Descend to the child for ``action``, creating it if absent; returns
    (cursor, created).  During rollout the cursor freezes and nothing is
    created, so each tree grows by at most one node per iteration."""
    if on_rollout:
        return v, False
    child = v.children.get(action)
    if child is not None:
        return child, False
    child = SearchNode(v, action, cell, mover)
    v.children[action] = child
    return child, True


def _backpropagate(v: SearchNode | None, ret: float) -> None:
    while v is not None:
        v.visits += 1
        v.total += ret
        v = v.parent


def _select_best_action(
    root: SearchNode,
    f_in: Flag,
    memory: PlannerMemory,
    game: PlannerGame,
) -> tuple[Direction, Flag]:
    if not root.children:
        raise PlanError("root has no children to choose from")
    rng = memory.rng
    f_out: Flag | None = None

    # Stage 1: protocol flags first.
    if f_in is Flag.INQUIRY:
        f_out = Flag.INQUIRY
    elif f_in is Flag.REJECT:
        last = memory.last_flag
        last_dir = last.to_direction()
        if last_dir is not None:
            memory.omega.add(game.cell(root.cell), last_dir)
        else:
            # Reject with nothing proposed: nothing to learn from it.
            logging.getLogger(__name__).warning(
                "protocol anomaly: Reject received but last flag was %s", last
            )
    elif f_in.is_action and f_in.to_direction().value not in game.own_moves[root.cell]:
        f_out = Flag.REJECT

    # Stage 2: most-visited child, request breaking ties.
    best_visits = max(child.visits for child in root.children.values())
    top = [child for child in root.children.values() if child.visits == best_visits]
    chosen: SearchNode | None = None
    if f_in.is_action:
        wanted = f_in.to_direction().value
        for child in top:
            if child.action == wanted:
                chosen = child
                break
    if chosen is None:
        chosen = top[0] if len(top) == 1 else top[rng.randrange(len(top))]

    # Stage 3: propose the partner's follow-up from unrefused grandchildren.
    if f_out is None:
        refused = {
            d.value for d in memory.omega.refused_at(game.cell(chosen.cell))
        }
        candidates = [g for g in chosen.children.values() if g.action not in refused]
        if not candidates:
            f_out = Flag.NONE
        else:
            top_visits = max(g.visits for g in candidates)
            leaders = [g for g in candidates if g.visits == top_visits]
            pick = leaders[0] if len(leaders) == 1 else leaders[rng.randrange(len(leaders))]
            f_out = Flag.from_direction(Direction(pick.action))

    memory.last_flag = f_out
    return Direction(chosen.action), f_out
