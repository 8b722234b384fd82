"""Rule-based sentence segmentation.

A boundary is a run of ``.``, ``!`` or ``?`` (plus closing quotes or
brackets) followed by whitespace and then an uppercase letter, a digit or an
opening quote. A period ending a known abbreviation never ends a sentence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .errors import ArgmineError
from .lexicon import Language, default_lexicon

_BOUNDARY = re.compile(r"[.!?]+[\"'”’»)\]]*(?=\s)")
_OPENERS = set("\"'“„«‘(")


@dataclass(frozen=True)
class SentenceSpan:
    index: int
    start: int
    end: int
    text: str
    role: Optional[str] = None


@lru_cache(maxsize=None)
def default_abbreviations(language: Language) -> frozenset[str]:
    return frozenset(default_lexicon(language).abbreviations)


def _ends_with_abbreviation(text: str, dot_end: int, abbreviations: frozenset[str]) -> bool:
    # token touching the terminator, e.g. "(z.B." -> "z.b."
    start = dot_end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    token = text[start:dot_end].lstrip("\"'“„«‘([").lower()
    return token in abbreviations


def _starts_sentence(ch: str) -> bool:
    return ch.isupper() or ch.isdigit() or ch in _OPENERS


def segment(
    text: str,
    language: Union[str, Language] = Language.EN,
    abbreviations: Optional[Iterable[str]] = None,
) -> list[SentenceSpan]:
    language = Language.parse(language)
    abbrevs = (
        frozenset(a.lower() for a in abbreviations)
        if abbreviations is not None
        else default_abbreviations(language)
    )
    cuts = []
    for m in _BOUNDARY.finditer(text):
        nxt = m.end()
        while nxt < len(text) and text[nxt].isspace():
            nxt += 1
        if nxt >= len(text) or not _starts_sentence(text[nxt]):
            continue
        run = m.group(0)
        if run.startswith(".") and len(run.rstrip("\"'”’»)]")) == 1:
            if _ends_with_abbreviation(text, m.start() + 1, abbrevs):
                continue
        cuts.append(m.end())
    cuts.append(len(text))

    spans: list[SentenceSpan] = []
    prev = 0
    for cut in cuts:
        chunk = text[prev:cut]
        stripped = chunk.strip()
        if stripped:
            start = prev + (len(chunk) - len(chunk.lstrip()))
            end = start + len(stripped)
            spans.append(SentenceSpan(len(spans), start, end, stripped))
        prev = cut
    return spans


def preset_segments(adus: Sequence[tuple[str, Optional[str]]]) -> list[SentenceSpan]:
    """Turn given (text, role) units into spans without any splitting.

    Offsets refer to the units joined by single spaces.
    """
    if not adus:
        raise ArgmineError("preset ADU list is empty")
    spans = []
    pos = 0
    for i, (text, role) in enumerate(adus):
        if not text or not text.strip():
            raise ArgmineError(f"preset ADU {i} has empty text")
        spans.append(SentenceSpan(i, pos, pos + len(text), text, role))
        pos += len(text) + 1
    return spans
