import random

import numpy as np
import pytest

from argmine.errors import FeatureError
from argmine.features import (
    EmbeddingTable,
    HashingEmbeddings,
    N_HANDCRAFTED,
    clause_count_proxy,
    cosine,
    depth_proxy,
    extract_features,
    load_vectors,
    open_embeddings,
    schema_id,
    sentence_embedding,
    tokenize,
)
from argmine.lexicon import Language, default_lexicon
from argmine.segment import SentenceSpan


@pytest.fixture
def table():
    return EmbeddingTable(
        2,
        {"cars": np.array([1.0, 0.0]), "pollute": np.array([0.0, 1.0]), "air": np.array([1.0, 1.0])},
    )


def test_load_vectors(tmp_path):
    p = tmp_path / "vec.txt"
    p.write_text("3 2\nCars 1 0\npollute 0 1\ncars 9 9\n", encoding="utf-8")
    t = load_vectors(p)
    assert t.dimension == 2 and len(t) == 2
    np.testing.assert_array_equal(t.get("CARS"), [1.0, 0.0])  # first entry wins, lookup case-insensitive


def test_load_vectors_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("a 1 2\nb 1\n", encoding="utf-8")
    with pytest.raises(FeatureError, match="expected 2 values"):
        load_vectors(bad)
    text = tmp_path / "text.txt"
    text.write_text("a 1 x\n", encoding="utf-8")
    with pytest.raises(FeatureError, match="non-numeric"):
        load_vectors(text)
    ok = tmp_path / "ok.txt"
    ok.write_text("a 1 2\n", encoding="utf-8")
    with pytest.raises(FeatureError):
        load_vectors(ok, expected_dimension=3)
    empty = tmp_path / "empty.txt"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(FeatureError, match="no vectors"):
        load_vectors(empty)
    with pytest.raises(FeatureError, match="cannot read"):
        load_vectors(tmp_path / "missing.txt")


def test_open_embeddings_spec():
    t = open_embeddings("hash:8:3")
    assert isinstance(t, HashingEmbeddings) and t.dimension == 8 and t.seed == 3
    with pytest.raises(FeatureError):
        open_embeddings("hash:x")


def test_hashing_embeddings_deterministic():
    a, b = HashingEmbeddings(16), HashingEmbeddings(16)
    np.testing.assert_array_equal(a.get("Tax"), b.get("tax"))
    assert not np.array_equal(a.get("tax"), a.get("school"))
    assert not np.array_equal(a.get("tax"), HashingEmbeddings(16, seed=1).get("tax"))


def test_sentence_embedding_is_mean(table):
    emb = sentence_embedding(tokenize("Cars pollute the air."), table)
    np.testing.assert_allclose(emb.vector, [2 / 3, 2 / 3])
    assert not emb.oov


def test_sentence_embedding_oov(table):
    emb = sentence_embedding(tokenize("Nothing known here!"), table)
    np.testing.assert_array_equal(emb.vector, [0.0, 0.0])
    assert emb.oov


def test_sentence_embedding_permutation_and_scaling(table):
    rng = random.Random(7)
    words = ["cars", "pollute", "air", "cars", "unknown"]
    base = sentence_embedding(words, table).vector
    for _ in range(20):
        rng.shuffle(words)
        np.testing.assert_allclose(sentence_embedding(words, table).vector, base, atol=1e-12)
        k = rng.uniform(0.1, 10.0)
        scaled = sentence_embedding(words, table.scaled(k)).vector
        np.testing.assert_allclose(scaled, k * base, rtol=1e-12)
        assert cosine(scaled, base) == pytest.approx(1.0)


def test_cosine():
    assert cosine([1, 0], [0, 1]) == 0.0
    assert cosine([1, 1], [2, 2]) == pytest.approx(1.0)
    assert cosine([1, 0], [-1, 0]) == pytest.approx(-1.0)
    assert cosine([0, 0], [1, 1]) == 0.0
    with pytest.raises(FeatureError):
        cosine([1, 0], [1, 0, 0])


def _features(text, index=0, count=1, lang="en"):
    return extract_features(SentenceSpan(index, 0, len(text), text), count, HashingEmbeddings(8), lang)


def test_indicator_flags():
    fv = _features("I believe that X.", 0, 4)
    assert fv.first_person and fv.relative_position == 0.0 and fv.sentence_index == 0
    assert _features("Therefore, X holds.").claim_indicator
    assert not _features("X holds.").claim_indicator
    assert _features("We should act.").modal_verb
    assert _features("This is true because data says so.").premise_indicator
    assert _features("Last one.", 3, 4).relative_position == 1.0


def test_counts():
    fv = _features("Cars, however, pollute (a lot)!")
    assert fv.token_count == 5
    assert fv.punctuation_count == 5
    assert fv.clause_count == 3
    assert fv.token_depth == 2


def test_proxies():
    subs = default_lexicon(Language.EN).subordinators
    assert clause_count_proxy(tokenize("Plain sentence."), subs) == 1
    assert depth_proxy(tokenize("Plain sentence."), subs) == 1
    toks = tokenize("It fails because (as we saw) prices rose, and then it stopped.")
    assert depth_proxy(toks, subs) == 3
    assert clause_count_proxy(toks, subs) == 3


def test_german_features():
    fv = _features("Ich glaube, dass wir handeln müssen.", lang="de")
    assert fv.first_person and fv.modal_verb


def test_as_array_layout():
    fv = _features("We should act now.")
    arr = fv.as_array()
    assert arr.shape == (N_HANDCRAFTED + 8,)
    np.testing.assert_array_equal(arr[N_HANDCRAFTED:], fv.embedding)
    assert arr[7] == 1.0  # modal flag
    assert schema_id(8) == "sent-v1/d8"


def test_extract_features_rejects_empty_document():
    with pytest.raises(FeatureError):
        _features("X.", 0, 0)
