"""Fixed surface forms for outgoing flags.

Action proposals and wall refusals use exact templates so the partner-side
parser can round-trip them; inquiry answers are free-form (LLM when
configured, a deterministic summary otherwise).
"""

from __future__ import annotations

from gnomes.core.types import Direction
from gnomes.flags import Flag
from gnomes.language.llm import TransportError
from gnomes.language.messages import GameInfoSnapshot

ACTION_TEMPLATE = "Can you {}?"
REJECT_TEMPLATE = "I cannot {} because there is a wall in that direction."


def render_action(flag: Flag) -> str:
    if not flag.is_action:
        raise ValueError(f"{flag} is not an action flag")
    return ACTION_TEMPLATE.format(flag.value)


def render_reject(proposed: Direction) -> str:
    return REJECT_TEMPLATE.format(proposed.word)


def describe_position(info: GameInfoSnapshot) -> str:
    """Deterministic inquiry answer used when no LLM is configured.

    Points at the treasure's general direction rather than exact
    coordinates, or says it cannot see it this round.
    """
    lead = f"I am at {info.token} and take {info.action.word} now."
    if not info.treasure_visible or info.treasure is None:
        return f"{lead} I cannot see the treasure this round; watch for walls."
    dx = info.treasure.x - info.token.x
    dy = info.treasure.y - info.token.y
    if dx == 0 and dy == 0:
        return f"{lead} We are standing on the treasure."
    parts = []
    if dy:
        parts.append("down" if dy > 0 else "up")
    if dx:
        parts.append("to the right" if dx > 0 else "to the left")
    return f"{lead} The treasure is {' and '.join(parts)} of us; walls may block the way."


def render_flag(
    f_out: Flag,
    info: GameInfoSnapshot,
    *,
    rejecting: Direction | None = None,
    inquiry_text: str = "",
    llm=None,
) -> str | None:
    """Text for an outgoing flag, or None when the flag is silent.

    Reject needs the partner's proposal (``rejecting``) to name the move
    being refused.  Inquiry consults the LLM when one is supplied.
    """
    if f_out in (Flag.NONE, Flag.ACCEPT):
        return None
    if f_out.is_action:
        return render_action(f_out)
    if f_out is Flag.REJECT:
        if rejecting is None:
            raise ValueError("a Reject message must name the refused move")
        return render_reject(rejecting)
    if f_out is Flag.INQUIRY:
        if llm is not None:
            try:
                return llm.answer(inquiry_text, info)
            except TransportError:
                return describe_position(info)
        return describe_position(info)
    raise ValueError(f"cannot render {f_out}")
