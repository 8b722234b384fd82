"""Language enum and the editable word lists shipped with the package."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .errors import ConfigError

LEXICON_NAMES = ("abbreviations", "claim", "premise", "first_person", "modal", "subordinators")


class Language(str, enum.Enum):
    EN = "en"
    DE = "de"

    @classmethod
    def parse(cls, value: Union[str, "Language"]) -> "Language":
        if isinstance(value, Language):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ConfigError(f"unsupported language {value!r} (expected en or de)") from None


def read_word_list(path: Union[str, Path]) -> tuple[str, ...]:
    """One entry per line; blank lines and ``#`` comments are skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read word list {path}: {exc}") from exc
    return _parse_list(text)


def _parse_list(text: str) -> tuple[str, ...]:
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line.lower())
    return tuple(entries)


@dataclass(frozen=True)
class Lexicon:
    language: Language
    abbreviations: tuple[str, ...]
    claim: tuple[str, ...]
    premise: tuple[str, ...]
    first_person: tuple[str, ...]
    modal: tuple[str, ...]
    subordinators: tuple[str, ...]

    @classmethod
    def load(cls, language: Union[str, Language], directory: Optional[Union[str, Path]] = None) -> "Lexicon":
        """Load the bundled lists, overridden by any ``<name>.txt`` in ``directory``."""
        language = Language.parse(language)
        bundled = resources.files("argmine") / "lexicons" / language.value
        lists = {}
        for name in LEXICON_NAMES:
            override = Path(directory) / f"{name}.txt" if directory is not None else None
            if override is not None and override.exists():
                lists[name] = read_word_list(override)
            else:
                lists[name] = _parse_list((bundled / f"{name}.txt").read_text(encoding="utf-8"))
        return cls(language=language, **lists)


@lru_cache(maxsize=None)
def default_lexicon(language: Language) -> Lexicon:
    return Lexicon.load(language)
