"""Request bodies for the HTTP API.

Response shapes and the event stream are documented as JSON Schema under
``schemas/`` at the repository root; clients should validate against those.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

ConditionName = Literal["vs-agent-comm", "vs-agent-mute", "vs-human"]
DirectionWord = Literal["noop", "right", "up", "left", "down"]


class CreateSessionRequest(BaseModel):
    condition: ConditionName
    maze_seed: int | None = None
    maze_file: str | None = None
    turn_cap: int | None = Field(default=None, ge=1)
    planner_iterations: int | None = Field(default=None, ge=1)


class JoinSessionRequest(BaseModel):
    token: str | None = None


class MoveRequest(BaseModel):
    client_id: str
    direction: DirectionWord


class ChatRequest(BaseModel):
    client_id: str
    text: str = Field(min_length=1)
