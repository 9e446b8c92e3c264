"""Round orchestration: the alternating move/message loop for self-play.

The partner moves first.  Each turn the mover sees the other seat's latest
flag, takes a move, and sends a flag back.  In the talking condition every
flag crosses the channel as rendered text and is parsed back on arrival;
in the mute condition both directions are forced silent.
"""

from __future__ import annotations

import time
from enum import Enum

from gnomes.core import engine
from gnomes.core.episode import EpisodeEntry, EpisodeLog
from gnomes.core.mazegen import MazeSetup
from gnomes.core.types import Cell, Direction, GameState, MazeSide, MoveOutcome, Player, RewardSpec
from gnomes.flags import Flag
from gnomes.harness.proxies import HumanProxy
from gnomes.language import GameInfoSnapshot, parse_message, render_action, render_reject
from gnomes.language import render_flag as _render_agent_flag
from gnomes.planner import PlannerConfig, PlannerGame, PlannerMemory, plan

#: Hard stop for a single round; an episode at the cap is logged unsolved.
TURN_CAP = 200


class Condition(Enum):
    COMM = "comm"
    MUTE = "mute"


def run_episode(
    side_e: MazeSide,
    side_h: MazeSide,
    *,
    start: Cell,
    treasure: Cell,
    treasure_side: Player,
    round_no: int,
    memory: PlannerMemory,
    proxy: HumanProxy,
    condition: Condition = Condition.COMM,
    config: PlannerConfig = PlannerConfig(),
    rewards: RewardSpec = RewardSpec(),
    turn_cap: int = TURN_CAP,
    llm=None,
) -> EpisodeLog:
    """Play one round to completion or the turn cap; returns the transcript.

    ``duration_s`` counts agent-side compute only (planning plus message
    rendering/parsing), never proxy decision time.
    """
    state = GameState(
        token=start,
        in_control=Player.H,
        turn=0,
        treasure=treasure,
        treasure_side=treasure_side,
        round_no=round_no,
    )
    log = EpisodeLog(round_no=round_no)
    if engine.is_final(state):
        log.solved = True
        return log

    game = PlannerGame.for_state(side_e, state, rewards)
    mute = condition is Condition.MUTE
    clock = 0.0
    to_h = Flag.NONE
    to_h_text: str | None = None
    to_e = Flag.NONE
    to_e_text: str | None = None

    while log.turns < turn_cap and not engine.is_final(state):
        if state.in_control is Player.H:
            move, reply = proxy.act(state, to_h)
            text = None
            delivered = Flag.NONE
            if not mute:
                text = _render_proxy_flag(reply, proposal=to_h)
                if text is not None:
                    t0 = time.perf_counter()
                    delivered = parse_message(text, llm)
                    clock += time.perf_counter() - t0
            else:
                reply = Flag.NONE
            _log_turn(log, state, Player.H, move, to_h, reply, to_h_text, text, rewards)
            state = engine.apply(side_h, state, move)
            to_e, to_e_text = delivered, text
        else:
            t0 = time.perf_counter()
            action, f_out = plan(state, to_e, memory, game, config)
            clock += time.perf_counter() - t0
            text = None
            delivered = Flag.NONE
            if mute:
                f_out = Flag.NONE
            else:
                t0 = time.perf_counter()
                text = _render_agent_message(f_out, state, action, refused=to_e, inquiry=to_e_text, llm=llm)
                if text is not None:
                    delivered = parse_message(text, llm)
                clock += time.perf_counter() - t0
            _log_turn(log, state, Player.E, action, to_e, f_out, to_e_text, text, rewards)
            state = engine.apply(side_e, state, action)
            to_h, to_h_text = delivered, text

    log.solved = engine.is_final(state)
    log.duration_s = clock
    return log


def run_game(
    setup: MazeSetup,
    memory: PlannerMemory,
    proxy: HumanProxy,
    *,
    condition: Condition = Condition.COMM,
    config: PlannerConfig = PlannerConfig(),
    rewards: RewardSpec = RewardSpec(),
    turn_cap: int = TURN_CAP,
    llm=None,
) -> list[EpisodeLog]:
    """All rounds of one maze, chained: each round starts where the token
    actually ended up (normally the previous treasure).  Planner memory and
    the proxy persist across rounds.
    """
    logs: list[EpisodeLog] = []
    token = setup.start_for(1)
    for spot in setup.treasures:
        log = run_episode(
            setup.side_e,
            setup.side_h,
            start=token,
            treasure=spot.cell,
            treasure_side=spot.side,
            round_no=spot.round_no,
            memory=memory,
            proxy=proxy,
            condition=condition,
            config=config,
            rewards=rewards,
            turn_cap=turn_cap,
            llm=llm,
        )
        logs.append(log)
        token = final_token(log, token)
    return logs


def final_token(log: EpisodeLog, start: Cell) -> Cell:
    """Where the token stands after the logged round."""
    if not log.entries:
        return start
    last = log.entries[-1]
    return last.state.token.step(last.action)


def _log_turn(
    log: EpisodeLog,
    state: GameState,
    player: Player,
    action: Direction,
    flag_in: Flag,
    flag_out: Flag,
    message_in: str | None,
    message_out: str | None,
    rewards: RewardSpec,
) -> None:
    outcome = (
        MoveOutcome.REACHED_GOAL if state.token.step(action) == state.treasure else MoveOutcome.MOVED
    )
    log.append(
        EpisodeEntry(
            turn=log.turns,
            player=player,
            state=state,
            action=action,
            flag_in=flag_in.value,
            flag_out=flag_out.value,
            message_in=message_in,
            message_out=message_out,
            reward=engine.reward(rewards, state, action, outcome),
        )
    )


def _render_proxy_flag(flag: Flag, proposal: Flag) -> str | None:
    """Text for a proxy's outgoing flag (stands in for the human typing)."""
    if flag.is_action:
        return render_action(flag)
    if flag is Flag.REJECT and proposal.is_action:
        return render_reject(proposal.to_direction())
    return None


def _render_agent_message(
    f_out: Flag,
    state: GameState,
    action: Direction,
    *,
    refused: Flag,
    inquiry: str | None,
    llm,
) -> str | None:
    if f_out is Flag.REJECT and not refused.is_action:
        return None
    visible = state.treasure_side is Player.E
    info = GameInfoSnapshot(state.token, action, state.treasure if visible else None, visible)
    return _render_agent_flag(
        f_out,
        info,
        rejecting=refused.to_direction() if f_out is Flag.REJECT else None,
        inquiry_text=inquiry or "",
        llm=llm,
    )
