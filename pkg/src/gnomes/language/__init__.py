"""Natural-language layer: message classification and reply rendering.

The keyword rules are the authoritative classifier; a chat-model client can
sit in front of them and is trusted only when its reply maps cleanly to a
single flag.
"""

from __future__ import annotations

import logging

from gnomes.flags import Flag
from gnomes.language.llm import LlmClient, LlmClientConfig, TransportError, client_from_env, map_reply_to_flag
from gnomes.language.messages import MAX_MESSAGE_CHARS, GameInfoSnapshot, check_message_length
from gnomes.language.rules import classify
from gnomes.language.templates import (
    ACTION_TEMPLATE,
    REJECT_TEMPLATE,
    describe_position,
    render_action,
    render_flag,
    render_reject,
)

log = logging.getLogger(__name__)

__all__ = [
    "ACTION_TEMPLATE",
    "MAX_MESSAGE_CHARS",
    "REJECT_TEMPLATE",
    "GameInfoSnapshot",
    "LlmClient",
    "LlmClientConfig",
    "TransportError",
    "check_message_length",
    "classify",
    "client_from_env",
    "describe_position",
    "map_reply_to_flag",
    "parse_message",
    "render_action",
    "render_flag",
    "render_reject",
]


def parse_message(text: str, llm: LlmClient | None = None) -> Flag:
    """Flag carried by a chat message.

    Empty input means nothing was said.  With a client attached the model
    gets first crack; the keyword rules take over whenever it errors out
    or replies with something no single flag matches.
    """
    check_message_length(text)
    if not text.strip():
        return Flag.NONE
    if llm is not None:
        try:
            flag = llm.classify(text)
        except TransportError as exc:
            log.warning("classification endpoint unavailable (%s); using rules", exc)
        else:
            if flag is not None:
                return flag
    return classify(text)
