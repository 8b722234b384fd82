"""Reading labelled training files and turning them into model inputs.

Sentence tasks (``adu``, ``claim_premise``) use ``label<TAB>text`` lines;
blank lines separate documents so that position features can be computed.
The ``relation`` task uses ``label<TAB>premise<TAB>claim`` lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .classify import Task, TrainConfig, pair_features, pair_schema_id, train_logistic, LinearModel
from .errors import ModelError
from .features import EmbeddingTable, extract_features, schema_id, sentence_embedding, tokenize
from .lexicon import Language, Lexicon
from .segment import SentenceSpan


@dataclass(frozen=True)
class Example:
    label: str
    texts: tuple[str, ...]
    index: int = 0
    doc_size: int = 1


def _canonical_label(raw: str, task: Task, where: str) -> str:
    lowered = raw.strip().lower()
    for name in task.classes:
        if lowered == name.lower():
            return name
    if lowered in ("0", "1"):
        return task.classes[int(lowered)]
    raise ModelError(f"{where}: label {raw!r} is not one of {task.classes}")


def read_examples(path: Union[str, Path], task: Union[str, Task]) -> list[Example]:
    task = Task.parse(task)
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ModelError(f"cannot read training data {path}: {exc}") from exc
    width = 3 if task is Task.RELATION else 2
    docs: list[list[tuple[str, tuple[str, ...]]]] = [[]]
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            if docs[-1]:
                docs.append([])
            continue
        if line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != width or not all(p.strip() for p in parts):
            raise ModelError(f"{path}:{lineno}: expected {width} tab-separated non-empty fields")
        docs[-1].append((_canonical_label(parts[0], task, f"{path}:{lineno}"), tuple(p.strip() for p in parts[1:])))
    examples = []
    for doc in docs:
        for i, (label, texts) in enumerate(doc):
            examples.append(Example(label, texts, i, len(doc)))
    if not examples:
        raise ModelError(f"{path}: no training examples")
    return examples


def featurize(
    examples: list[Example],
    task: Union[str, Task],
    table: EmbeddingTable,
    language: Union[str, Language],
    lexicon: Optional[Lexicon] = None,
) -> tuple[list[np.ndarray], list[str], str]:
    """Model inputs, labels and the schema id they conform to."""
    task = Task.parse(task)
    xs = []
    for ex in examples:
        if task is Task.RELATION:
            premise = sentence_embedding(tokenize(ex.texts[0]), table).vector
            claim = sentence_embedding(tokenize(ex.texts[1]), table).vector
            xs.append(pair_features(premise, claim))
        else:
            span = SentenceSpan(ex.index, 0, len(ex.texts[0]), ex.texts[0])
            xs.append(extract_features(span, ex.doc_size, table, language, lexicon).as_array())
    schema = pair_schema_id(table.dimension) if task is Task.RELATION else schema_id(table.dimension)
    return xs, [ex.label for ex in examples], schema


def train_from_file(
    path: Union[str, Path],
    task: Union[str, Task],
    table: EmbeddingTable,
    language: Union[str, Language],
    config: TrainConfig = TrainConfig(),
    lexicon: Optional[Lexicon] = None,
) -> LinearModel:
    task = Task.parse(task)
    xs, ys, schema = featurize(read_examples(path, task), task, table, language, lexicon)
    return train_logistic(xs, ys, config, task, schema, language)
