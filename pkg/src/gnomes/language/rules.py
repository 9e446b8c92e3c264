"""Keyword classifier from chat text to intent flags.

Always available; the LLM path falls back to this on transport trouble or
unmappable replies.  Priority order: direction words (unless negated), then
question-shaped inquiries, then affirmations, then refusals.  Empty or
unrecognized text is silence.
"""

from __future__ import annotations

import re

from gnomes.flags import Flag

_WORDS = re.compile(r"[a-z']+")

_DIRECTION_WORDS = {
    "right": Flag.RIGHT,
    "east": Flag.RIGHT,
    "up": Flag.UP,
    "north": Flag.UP,
    "upward": Flag.UP,
    "upwards": Flag.UP,
    "left": Flag.LEFT,
    "west": Flag.LEFT,
    "down": Flag.DOWN,
    "south": Flag.DOWN,
    "downward": Flag.DOWN,
    "downwards": Flag.DOWN,
    "noop": Flag.NOOP,
    "stay": Flag.NOOP,
    "wait": Flag.NOOP,
    "stop": Flag.NOOP,
    "hold": Flag.NOOP,
    "still": Flag.NOOP,
}

_NEGATIONS = {
    "not",
    "cannot",
    "can't",
    "cant",
    "don't",
    "dont",
    "won't",
    "wont",
    "no",
    "never",
    "unable",
    "couldn't",
    "couldnt",
    "shouldn't",
    "shouldnt",
}

_INTERROGATIVES = {
    "what",
    "where",
    "which",
    "who",
    "whose",
    "why",
    "how",
    "when",
    "can",
    "could",
    "would",
    "should",
    "do",
    "does",
    "did",
    "is",
    "are",
    "am",
    "any",
}

_AFFIRMATIONS = {
    "ok",
    "okay",
    "k",
    "yes",
    "yep",
    "yeah",
    "sure",
    "alright",
    "fine",
    "good",
    "sounds",
    "got",
    "it",
    "will",
    "do",
    "done",
    "deal",
    "agreed",
    "roger",
}

_REFUSALS = {
    "wall",
    "walled",
    "blocked",
    "cannot",
    "can't",
    "cant",
    "won't",
    "wont",
    "unable",
    "nope",
    "no",
    "not",
}

#: How many tokens back a negation still bites.
_NEGATION_WINDOW = 3


def classify(text: str) -> Flag:
    """Map free text to a flag; empty or unintelligible text means silence."""
    if not text or not text.strip():
        return Flag.NONE
    tokens = _WORDS.findall(text.lower())

    for i, token in enumerate(tokens):
        flag = _DIRECTION_WORDS.get(token)
        if flag is None:
            continue
        window = tokens[max(0, i - _NEGATION_WINDOW) : i]
        if not any(w in _NEGATIONS for w in window):
            return flag

    if "?" in text and any(t in _INTERROGATIVES for t in tokens):
        return Flag.INQUIRY

    if tokens and all(t in _AFFIRMATIONS for t in tokens):
        return Flag.ACCEPT

    if any(t in _REFUSALS for t in tokens):
        return Flag.REJECT

    return Flag.NONE
