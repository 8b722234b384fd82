"""Major-claim selection heuristics.

Each heuristic takes the document's ADUs in text order and returns one of
them. Ties always go to the earliest ADU.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ArgmineError
from .features import FeatureVector, cosine
from .relations import RelationMatrix
from .segment import SentenceSpan

CLAIM = "Claim"
PREMISE = "Premise"
MAJOR_CLAIM = "MajorClaim"


@dataclass(frozen=True, eq=False)
class Adu:
    id: str
    span: SentenceSpan
    role: str
    embedding: np.ndarray = field(repr=False)
    features: Optional[FeatureVector] = field(default=None, repr=False)

    @property
    def text(self) -> str:
        return self.span.text

    @property
    def position(self) -> int:
        return self.span.index


def _require(adus: Sequence[Adu]) -> None:
    if not adus:
        raise ArgmineError("cannot select a major claim from an empty ADU list")


def _argmax_first(scores: Sequence[float]) -> int:
    best = 0
    for i, s in enumerate(scores):
        if s > scores[best]:
            best = i
    return best


def mc_first(adus: Sequence[Adu]) -> Adu:
    """First claim in text order; the first ADU when there is no claim."""
    _require(adus)
    for a in adus:
        if a.role == CLAIM:
            return a
    return adus[0]


def mc_centroid(adus: Sequence[Adu]) -> Adu:
    _require(adus)
    vectors = np.vstack([a.embedding for a in adus])
    if not np.any(vectors):
        raise ArgmineError("all ADU embeddings are zero")
    centroid = vectors.mean(axis=0)
    return adus[_argmax_first([cosine(v, centroid) for v in vectors])]


def pairwise_cosine(adus: Sequence[Adu]) -> np.ndarray:
    n = len(adus)
    sims = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sims[i, j] = sims[j, i] = cosine(adus[i].embedding, adus[j].embedding)
    return sims


def mc_pairwise(adus: Sequence[Adu]) -> Adu:
    """ADU with the highest mean cosine similarity to all the others."""
    _require(adus)
    if len(adus) == 1:
        return adus[0]
    sims = pairwise_cosine(adus)
    means = sims.sum(axis=1) / (len(adus) - 1)
    return adus[_argmax_first(means.tolist())]


def probability_scores(adus: Sequence[Adu], relations: RelationMatrix, direction: str = "incoming") -> list[float]:
    """Mean non-neutral relation probability per ADU.

    ``incoming`` scores an ADU on the pairs where it is the claim,
    ``both`` also includes the pairs where it is the premise.
    """
    if direction not in ("incoming", "both"):
        raise ArgmineError(f"unknown probability direction {direction!r}")
    scores = []
    for a in adus:
        probs = []
        for b in adus:
            if b is a:
                continue
            pairs = [(b.id, a.id)] if direction == "incoming" else [(b.id, a.id), (a.id, b.id)]
            for key in pairs:
                pred = relations.get(key)
                if pred is not None and not pred.neutral:
                    probs.append(pred.probability)
        scores.append(sum(probs) / len(probs) if probs else 0.0)
    return scores


def mc_probability(adus: Sequence[Adu], relations: RelationMatrix, direction: str = "incoming") -> Adu:
    _require(adus)
    if len(adus) == 1:
        return adus[0]
    return adus[_argmax_first(probability_scores(adus, relations, direction))]


METHODS: dict[str, Callable[..., Adu]] = {
    "first": mc_first,
    "centroid": mc_centroid,
    "pairwise": mc_pairwise,
    "probability": mc_probability,
}


def select_major_claim(
    method: str,
    adus: Sequence[Adu],
    relations: Optional[RelationMatrix] = None,
    direction: str = "incoming",
) -> Adu:
    if method not in METHODS:
        raise ArgmineError(f"unknown major-claim method {method!r} (expected one of {', '.join(METHODS)})")
    if method == "probability":
        if relations is None:
            raise ArgmineError("the probability heuristic needs relation predictions")
        return mc_probability(adus, relations, direction)
    return METHODS[method](adus)
