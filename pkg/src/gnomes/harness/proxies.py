"""Scripted partner policies standing in for a live human player.

Each proxy only consults its own wall set, and the treasure only in rounds
where its side can see it.  A proxy turn yields the move it takes plus the
flag it sends back, so episodes can run without any typing human.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from typing import NamedTuple

from gnomes.core import engine
from gnomes.core.oracle import side_distances
from gnomes.core.types import Cell, Direction, GameState, MazeSide, Player
from gnomes.flags import Flag


class ProxyMove(NamedTuple):
    action: Direction
    flag: Flag


class HumanProxy(ABC):
    """Base partner policy: owns one maze side and a seeded RNG."""

    def __init__(self, side: MazeSide, seed: int = 0):
        self.side = side
        self.rng = random.Random(seed)
        self._round_key: tuple[int, Cell] | None = None
        self._dist: dict[Cell, int] | None = None
        self._visits: dict[Cell, int] = {}

    def _sync_round(self, state: GameState) -> None:
        key = (state.round_no, state.treasure)
        if key == self._round_key:
            return
        self._round_key = key
        self._visits = {}
        if state.treasure_side is Player.H:
            self._dist = side_distances(self.side, state.treasure)
        else:
            self._dist = None

    @property
    def sighted(self) -> bool:
        return self._dist is not None

    def act(self, state: GameState, incoming: Flag) -> ProxyMove:
        """Move to take and flag to send, given the partner's last flag."""
        self._sync_round(state)
        self._visits[state.token] = self._visits.get(state.token, 0) + 1
        return self._act(state, incoming)

    @abstractmethod
    def _act(self, state: GameState, incoming: Flag) -> ProxyMove: ...

    # movement helpers

    def _moves(self, cell: Cell) -> list[Direction]:
        steps = engine.valid_actions(self.side, cell) - {Direction.NOOP}
        return sorted(steps, key=lambda d: d.value)

    def _greedy_step(self, cell: Cell) -> Direction:
        """Step minimizing own-side distance to the treasure."""
        assert self._dist is not None
        moves = self._moves(cell)
        if not moves:
            return Direction.NOOP
        here = self._dist.get(cell)
        if here is None:
            return self.rng.choice(moves)
        best = min(self._dist.get(cell.step(d), here) for d in moves)
        ties = [d for d in moves if self._dist.get(cell.step(d), here) == best]
        return self.rng.choice(ties)

    def _explore_step(self, cell: Cell) -> Direction:
        """Step toward the least-visited neighbour (blind rounds)."""
        moves = self._moves(cell)
        if not moves:
            return Direction.NOOP
        best = min(self._visits.get(cell.step(d), 0) for d in moves)
        ties = [d for d in moves if self._visits.get(cell.step(d), 0) == best]
        return self.rng.choice(ties)


class GreedyFlagging(HumanProxy):
    """Cooperative partner: follows useful proposals, refuses walled ones,
    and when it can see the treasure tells the agent the next step to take.

    ``error_rate`` injects false refusals of valid proposals, modeling a
    player who mistakenly claims a wall.
    """

    def __init__(self, side: MazeSide, seed: int = 0, error_rate: float = 0.0):
        if not 0.0 <= error_rate <= 1.0:
            raise ValueError("error_rate must be within [0, 1]")
        super().__init__(side, seed)
        self.error_rate = error_rate
        self._refused: dict[Cell, set[Direction]] = {}
        self._last_guidance: tuple[Cell, Direction] | None = None

    def _act(self, state: GameState, incoming: Flag) -> ProxyMove:
        cell = state.token
        if incoming is Flag.REJECT and self._last_guidance is not None:
            where, direction = self._last_guidance
            self._refused.setdefault(where, set()).add(direction)
        self._last_guidance = None

        proposal = incoming.to_direction() if incoming.is_action else None
        if proposal is not None:
            if proposal is not Direction.NOOP and self.side.blocked(cell, proposal):
                return ProxyMove(self._reject_move(cell, proposal), Flag.REJECT)
            if (
                proposal is not Direction.NOOP
                and self.error_rate > 0
                and self.rng.random() < self.error_rate
            ):
                return ProxyMove(Direction.NOOP, Flag.REJECT)
            if not self.sighted:
                return ProxyMove(proposal, Flag.ACCEPT)
            move = proposal if self._improves(cell, proposal) else self._greedy_step(cell)
            return ProxyMove(move, self._guidance(cell.step(move), state.treasure))

        if self.sighted:
            move = self._greedy_step(cell)
            return ProxyMove(move, self._guidance(cell.step(move), state.treasure))
        return ProxyMove(self._explore_step(cell), Flag.NONE)

    def _reject_move(self, cell: Cell, proposal: Direction) -> Direction:
        """Move taken while refusing ``proposal``.

        The agent books the refusal at wherever the token stands on its next
        turn, so we may only move if the refused direction is walled at the
        destination too; otherwise we stay so the booked wall is real.
        """
        move = self._greedy_step(cell) if self.sighted else self._explore_step(cell)
        if move is not Direction.NOOP and self.side.blocked(cell.step(move), proposal):
            return move
        return Direction.NOOP

    def _improves(self, cell: Cell, move: Direction) -> bool:
        assert self._dist is not None
        here = self._dist.get(cell)
        there = self._dist.get(cell.step(move))
        return here is not None and there is not None and there < here

    def _guidance(self, cell: Cell, treasure: Cell) -> Flag:
        """Flag for the next move the agent should make from ``cell``.

        Only steps on an own-side shortest path qualify; steps the agent
        already refused at this cell are skipped.  Falls back to silence
        when nothing qualifies (or the round just ended).
        """
        assert self._dist is not None
        if cell == treasure:
            return Flag.NONE
        here = self._dist.get(cell)
        if here is None:
            return Flag.NONE
        refused = self._refused.get(cell, set())
        options = [
            d
            for d in self._moves(cell)
            if d not in refused and self._dist.get(cell.step(d)) == here - 1
        ]
        if not options:
            return Flag.NONE
        choice = self.rng.choice(options)
        self._last_guidance = (cell, choice)
        return Flag.from_direction(choice)


class RandomCompliant(HumanProxy):
    """Follows any proposal it can; otherwise wanders uniformly, silently."""

    def _act(self, state: GameState, incoming: Flag) -> ProxyMove:
        cell = state.token
        proposal = incoming.to_direction() if incoming.is_action else None
        if proposal is not None:
            if proposal is not Direction.NOOP and self.side.blocked(cell, proposal):
                return ProxyMove(Direction.NOOP, Flag.REJECT)
            return ProxyMove(proposal, Flag.ACCEPT)
        moves = self._moves(cell)
        if not moves:
            return ProxyMove(Direction.NOOP, Flag.NONE)
        return ProxyMove(self.rng.choice(moves), Flag.NONE)


class SilentGreedy(HumanProxy):
    """Never communicates: ignores every flag, moves greedily or explores."""

    def _act(self, state: GameState, incoming: Flag) -> ProxyMove:
        cell = state.token
        move = self._greedy_step(cell) if self.sighted else self._explore_step(cell)
        return ProxyMove(move, Flag.NONE)
