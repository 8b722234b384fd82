"""Pairwise relation predictions between the ADUs of one document."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping, Optional

import numpy as np

from .classify import Classifier, RelationPrediction, classify_relation


class RelationMatrix(Mapping):
    """(child id, parent id) -> RelationPrediction, without self-pairs.

    Read-only once built.
    """

    def __init__(self, entries: Optional[dict[tuple[str, str], RelationPrediction]] = None):
        entries = dict(entries or {})
        for (a, b), pred in entries.items():
            if a == b:
                raise ValueError(f"self-pair ({a}, {b}) in relation matrix")
            if not 0.0 <= pred.probability <= 1.0:
                raise ValueError(f"probability outside [0, 1] for ({a}, {b})")
        self._entries = entries

    def __getitem__(self, key: tuple[str, str]) -> RelationPrediction:
        return self._entries[key]

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def probability(self, child: str, parent: str) -> float:
        pred = self._entries.get((child, parent))
        return pred.probability if pred is not None else 0.0

    def relabel(self, mapping: Mapping[str, str]) -> "RelationMatrix":
        return RelationMatrix({(mapping.get(a, a), mapping.get(b, b)): p for (a, b), p in self._entries.items()})

    @classmethod
    def from_function(
        cls, ids: Iterable[str], predict: Callable[[str, str], RelationPrediction]
    ) -> "RelationMatrix":
        ids = list(ids)
        return cls({(a, b): predict(a, b) for a in ids for b in ids if a != b})

    @classmethod
    def from_model(
        cls,
        embeddings: Mapping[str, np.ndarray],
        model: Classifier,
        neutral_threshold: float,
    ) -> "RelationMatrix":
        """Classify every ordered pair of units (premise -> claim)."""
        return cls.from_function(
            embeddings,
            lambda a, b: classify_relation(embeddings[a], embeddings[b], model, neutral_threshold),
        )
