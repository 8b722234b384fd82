"""Per-sentence feature vectors and averaged word-vector embeddings."""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import FeatureError
from .lexicon import Language, Lexicon, default_lexicon
from .segment import SentenceSpan

FEATURE_SCHEMA_VERSION = "sent-v1"
N_HANDCRAFTED = 10

_TOKEN = re.compile(r"\w+(?:[-'’]\w+)*|[^\w\s]")
_OPEN = set("([{")
_CLOSE = set(")]}")


def tokenize(text: str) -> list[str]:
    """Lowercased word and punctuation tokens."""
    return [t.lower() for t in _TOKEN.findall(text)]


def is_word(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


class EmbeddingTable:
    """Read-only token -> vector lookup; tokens are case-normalized."""

    def __init__(self, dimension: int, entries: dict[str, np.ndarray]):
        if dimension <= 0:
            raise FeatureError("embedding dimension must be positive")
        self.dimension = dimension
        self._entries = entries

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self._entries

    def get(self, token: str) -> Optional[np.ndarray]:
        return self._entries.get(token.lower())

    def scaled(self, factor: float) -> "EmbeddingTable":
        return EmbeddingTable(self.dimension, {k: v * factor for k, v in self._entries.items()})

    @property
    def source(self) -> str:
        return "file"


class HashingEmbeddings(EmbeddingTable):
    """Deterministic pseudo-random vector per token.

    Stands in for pre-trained vectors when none are configured: every token
    gets a fixed Gaussian vector seeded from a hash of the token, so equal
    words share a vector and the table never reports a token as missing.
    """

    def __init__(self, dimension: int = 50, seed: int = 0):
        super().__init__(dimension, {})
        self.seed = seed
        self._cache = lru_cache(maxsize=100_000)(self._vector)

    def __len__(self) -> int:
        return 0

    def __contains__(self, token: str) -> bool:
        return True

    def _vector(self, token: str) -> np.ndarray:
        digest = hashlib.blake2b(f"{self.seed}:{token}".encode("utf-8"), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        vec = rng.standard_normal(self.dimension) / math.sqrt(self.dimension)
        vec.setflags(write=False)
        return vec

    def get(self, token: str) -> np.ndarray:
        return self._cache(token.lower())

    def scaled(self, factor: float) -> EmbeddingTable:
        raise NotImplementedError("hashing embeddings cannot be rescaled")

    @property
    def source(self) -> str:
        return f"hash{self.dimension}-{self.seed}"


def load_vectors(path: Union[str, Path], expected_dimension: Optional[int] = None) -> EmbeddingTable:
    """Read a word-vector text file: ``token v1 ... vD`` per line.

    Duplicate tokens keep their first vector. A leading word2vec-style
    header line (``count dim``) is skipped.
    """
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise FeatureError(f"cannot read vectors {path}: {exc}") from exc
    entries: dict[str, np.ndarray] = {}
    dim = expected_dimension
    with fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").rstrip().split(" ")
            if len(parts) < 2 or not parts[0]:
                continue
            if lineno == 1 and len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
                continue
            token, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
            if len(values) != dim:
                raise FeatureError(f"{path}:{lineno}: expected {dim} values, found {len(values)}")
            try:
                vec = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise FeatureError(f"{path}:{lineno}: non-numeric field ({exc})") from exc
            entries.setdefault(token.lower(), vec)
    if not entries:
        raise FeatureError(f"{path}: no vectors")
    return EmbeddingTable(dim, entries)


def open_embeddings(spec: str) -> EmbeddingTable:
    """``hash:<dim>[:<seed>]`` builds hashing embeddings, anything else is a file path."""
    if spec.startswith("hash:"):
        parts = spec.split(":")
        try:
            dim = int(parts[1])
            seed = int(parts[2]) if len(parts) > 2 else 0
        except (IndexError, ValueError):
            raise FeatureError(f"bad hashing embedding spec {spec!r}") from None
        return HashingEmbeddings(dim, seed)
    return load_vectors(spec)


class SentenceEmbedding(NamedTuple):
    vector: np.ndarray
    oov: bool  # True when no token was found and the zero vector was returned


def sentence_embedding(tokens: Sequence[str], table: EmbeddingTable) -> SentenceEmbedding:
    found = [v for v in (table.get(t) for t in tokens if is_word(t)) if v is not None]
    if not found:
        return SentenceEmbedding(np.zeros(table.dimension), True)
    return SentenceEmbedding(np.mean(found, axis=0), False)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0.0 when either vector is zero."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise FeatureError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


@dataclass(frozen=True)
class FeatureVector:
    punctuation_count: int
    token_count: int
    sentence_index: int
    relative_position: float
    claim_indicator: bool
    premise_indicator: bool
    first_person: bool
    modal_verb: bool
    # stand-ins for parse-tree statistics, see clause_count_proxy/depth_proxy
    clause_count: int
    token_depth: int
    embedding: np.ndarray = field(repr=False, compare=False)
    embedding_oov: bool = False

    def as_array(self) -> np.ndarray:
        """Model input: log-scaled counts, 0/1 flags, then the embedding."""
        head = np.array(
            [
                math.log1p(self.punctuation_count),
                math.log1p(self.token_count),
                math.log1p(self.sentence_index),
                self.relative_position,
                float(self.claim_indicator),
                float(self.premise_indicator),
                float(self.first_person),
                float(self.modal_verb),
                math.log1p(self.clause_count),
                math.log1p(self.token_depth),
            ]
        )
        return np.concatenate([head, self.embedding])


def schema_id(dimension: int) -> str:
    return f"{FEATURE_SCHEMA_VERSION}/d{dimension}"


def _contains_phrase(tokens: Sequence[str], phrases: Sequence[str]) -> bool:
    padded = " " + " ".join(tokens) + " "
    return any(f" {p} " in padded for p in phrases)


def clause_count_proxy(tokens: Sequence[str], subordinators: Sequence[str]) -> int:
    """1 + commas/semicolons + subordinating conjunctions."""
    subs = set(subordinators)
    return 1 + sum(1 for t in tokens if t in (",", ";") or t in subs)


def depth_proxy(tokens: Sequence[str], subordinators: Sequence[str]) -> int:
    """1 + maximum nesting of brackets and subordinate clauses.

    A subordinator opens a clause that a following comma or semicolon
    closes; brackets nest independently.
    """
    subs = set(subordinators)
    brackets = clauses = best = 0
    for t in tokens:
        if t in _OPEN:
            brackets += 1
        elif t in _CLOSE:
            brackets = max(0, brackets - 1)
        elif t in subs:
            clauses += 1
        elif t in (",", ";") and clauses:
            clauses -= 1
        best = max(best, brackets + clauses)
    return 1 + best


def extract_features(
    span: SentenceSpan,
    doc_sentence_count: int,
    table: EmbeddingTable,
    language: Union[str, Language] = Language.EN,
    lexicon: Optional[Lexicon] = None,
) -> FeatureVector:
    if doc_sentence_count < 1:
        raise FeatureError("document must contain at least one sentence")
    lex = lexicon if lexicon is not None else default_lexicon(Language.parse(language))
    tokens = tokenize(span.text)
    words = [t for t in tokens if is_word(t)]
    emb = sentence_embedding(tokens, table)
    rel = span.index / (doc_sentence_count - 1) if doc_sentence_count > 1 else 0.0
    return FeatureVector(
        punctuation_count=len(tokens) - len(words),
        token_count=len(words),
        sentence_index=span.index,
        relative_position=min(1.0, max(0.0, rel)),
        claim_indicator=_contains_phrase(words, lex.claim),
        premise_indicator=_contains_phrase(words, lex.premise),
        first_person=any(w in set(lex.first_person) for w in words),
        modal_verb=any(w in set(lex.modal) for w in words),
        clause_count=clause_count_proxy(tokens, lex.subordinators),
        token_depth=depth_proxy(tokens, lex.subordinators),
        embedding=emb.vector,
        embedding_oov=emb.oov,
    )
