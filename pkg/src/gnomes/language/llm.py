"""Client for an OpenAI-style chat-completions endpoint.

Entirely optional: the game runs on the keyword rules alone.  Prompt text
lives in versioned assets next to this module; the client only fills slots
(message, token position, move, treasure line) and maps the reply back to
a flag.  All transport trouble surfaces as :class:`TransportError` so
callers can degrade to the rule path.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from importlib import resources

import httpx

from gnomes.flags import Flag
from gnomes.language.messages import GameInfoSnapshot

log = logging.getLogger(__name__)

_LABELS = ("noop", "right", "up", "left", "down", "accept", "reject", "inquiry", "none")
_LABEL_FLAGS = {
    "noop": Flag.NOOP,
    "right": Flag.RIGHT,
    "up": Flag.UP,
    "left": Flag.LEFT,
    "down": Flag.DOWN,
    "accept": Flag.ACCEPT,
    "reject": Flag.REJECT,
    "inquiry": Flag.INQUIRY,
    "none": Flag.NONE,
}


class TransportError(Exception):
    """The endpoint could not produce a usable reply."""


@dataclass(frozen=True)
class LlmClientConfig:
    endpoint: str
    model: str = "gpt-3.5-turbo"
    auth_env: str = "OPENAI_API_KEY"
    timeout: float = 10.0
    max_retries: int = 2

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")


def _load_prompt(name: str) -> str:
    return (
        resources.files("gnomes.language").joinpath("prompts", name).read_text("utf-8").rstrip("\n")
    )


def map_reply_to_flag(raw: str) -> Flag | None:
    """Exact label match first, then substring search; ambiguity means None."""
    cleaned = "".join(c for c in raw.strip().lower() if c.isalnum() or c.isspace()).strip()
    if cleaned in _LABEL_FLAGS:
        return _LABEL_FLAGS[cleaned]
    found = [label for label in _LABELS if label in cleaned]
    if len(found) == 1:
        return _LABEL_FLAGS[found[0]]
    return None


class LlmClient:
    def __init__(self, config: LlmClientConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self._classify_system = _load_prompt("classify_system_v1.txt")
        self._classify_user = _load_prompt("classify_user_v1.txt")
        self._respond_system = _load_prompt("respond_system_v1.txt")
        self._respond_user = _load_prompt("respond_user_v1.txt")
        headers = {}
        token = os.environ.get(config.auth_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self._http = httpx.Client(
            base_url=config.endpoint,
            timeout=config.timeout,
            headers=headers,
            transport=transport,
        )

    def close(self) -> None:
        self._http.close()

    def classify(self, message: str) -> Flag | None:
        """Flag for a chat message, or None when the reply is unusable."""
        reply = self._chat(
            [
                {"role": "system", "content": self._classify_system},
                {"role": "user", "content": self._classify_user.format(message=message)},
            ]
        )
        flag = map_reply_to_flag(reply)
        if flag is None:
            log.warning("unmappable model reply %r", reply)
        return flag

    def answer(self, inquiry: str, info: GameInfoSnapshot) -> str:
        if info.treasure_visible and info.treasure is not None:
            treasure_line = f"Treasure position: {info.treasure}"
        else:
            treasure_line = "You cannot see the treasure position."
        prompt = self._respond_user.format(
            token=info.token,
            action=info.action.word,
            treasure_line=treasure_line,
            message=inquiry,
        )
        return self._chat(
            [
                {"role": "system", "content": self._respond_system},
                {"role": "user", "content": prompt},
            ]
        )

    def _chat(self, messages: list[dict[str, str]]) -> str:
        payload = {"model": self.config.model, "messages": messages, "temperature": 0}
        last_error: Exception | None = None
        for _ in range(self.config.max_retries + 1):
            try:
                response = self._http.post("/chat/completions", json=payload)
                response.raise_for_status()
                body = response.json()
                return body["choices"][0]["message"]["content"]
            except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
                last_error = exc
        raise TransportError(f"chat endpoint failed: {last_error}") from last_error


def client_from_env(prefix: str = "GNOMES_LLM") -> LlmClient | None:
    """Build a client from ``<prefix>_ENDPOINT`` etc.; None when unset."""
    endpoint = os.environ.get(f"{prefix}_ENDPOINT")
    if not endpoint:
        return None
    config = LlmClientConfig(
        endpoint=endpoint,
        model=os.environ.get(f"{prefix}_MODEL", "gpt-3.5-turbo"),
        auth_env=os.environ.get(f"{prefix}_AUTH_ENV", "OPENAI_API_KEY"),
        timeout=float(os.environ.get(f"{prefix}_TIMEOUT", "10")),
    )
    return LlmClient(config)
