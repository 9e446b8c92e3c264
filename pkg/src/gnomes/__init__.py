"""Cooperative shared-control maze game.

Two players steer one token through a maze whose walls differ per side;
each side sees only its own walls.  Subpackages: ``core`` (rules, maze
generation, oracle), ``planner`` (flag-aware Monte Carlo tree search),
``language`` (chat-to-flag translation), ``harness`` (self-play
experiments), ``server`` (live play over HTTP/WebSocket).
"""

__version__ = "0.1.0"
