import random

import pytest
from hypothesis import given, settings, strategies as st

from argmine.errors import ArgmineError
from argmine.segment import preset_segments, segment

from conftest import random_text


def test_two_sentences():
    spans = segment("Cars pollute. We should ban them.")
    assert [s.text for s in spans] == ["Cars pollute.", "We should ban them."]
    assert [s.index for s in spans] == [0, 1]
    assert (spans[1].start, spans[1].end) == (14, 33)


def test_abbreviation_does_not_split():
    spans = segment("Some cities, e.g. Paris, restrict cars. Others do not.")
    assert len(spans) == 2
    assert spans[0].text == "Some cities, e.g. Paris, restrict cars."


def test_title_abbreviation():
    assert len(segment("Dr. Smith disagrees. He has data.")) == 2


def test_lowercase_continuation_does_not_split():
    assert len(segment("The value is approx. equal to three. Fine.")) == 2
    assert len(segment("It costs 3.5 euros. That is cheap.")) == 2


def test_question_and_exclamation():
    spans = segment('Is it fair? No! "Never," she said.')
    assert [s.text for s in spans] == ["Is it fair?", "No!", '"Never," she said.']


def test_empty_and_blank_input():
    assert segment("") == []
    assert segment("   \n\t ") == []


def test_german_abbreviations():
    text = "Viele Städte, z.B. Berlin, sperren Autos. Das ist gut."
    assert len(segment(text, "de")) == 2
    assert len(segment("Das Verbot gilt usw. Die Stadt ist dafür.", "de")) == 1


def test_custom_abbreviations():
    assert len(segment("See Fig. Two shows it.", abbreviations=[])) == 2
    assert len(segment("See Fig. Two shows it.", abbreviations=["fig."])) == 1


def _doc(seed: int) -> str:
    rng = random.Random(seed)
    return ("  " if seed % 2 else "").join(
        random_text(rng, k) + rng.choice([" ", "  ", "\n"]) for k in range(rng.randint(0, 12))
    )


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_spans_cover_text_losslessly(seed):
    text = _doc(seed)
    spans = segment(text)
    for s in spans:
        assert text[s.start:s.end] == s.text
        assert s.text == s.text.strip() and s.text
    for a, b in zip(spans, spans[1:]):
        assert a.end <= b.start
        assert text[a.end:b.start].strip() == ""
    # nothing but whitespace outside the spans
    assert "".join(s.text for s in spans).replace(" ", "") == "".join(text.split())


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_segmentation_idempotent_and_deterministic(seed):
    text = _doc(seed)
    spans = segment(text)
    assert segment(text) == spans
    for s in spans:
        assert [t.text for t in segment(s.text)] == [s.text]


@given(st.text(max_size=200))
@settings(max_examples=200, deadline=None)
def test_arbitrary_text_never_crashes(text):
    for s in segment(text):
        assert text[s.start:s.end] == s.text


def test_preset_segments():
    spans = preset_segments([("Ban cars.", "MajorClaim"), ("They pollute.", "Premise")])
    assert [(s.index, s.start, s.end, s.role) for s in spans] == [(0, 0, 9, "MajorClaim"), (1, 10, 23, "Premise")]
    joined = " ".join(["Ban cars.", "They pollute."])
    assert all(joined[s.start:s.end] == s.text for s in spans)


def test_preset_segments_errors():
    with pytest.raises(ArgmineError):
        preset_segments([])
    with pytest.raises(ArgmineError, match="empty text"):
        preset_segments([("ok.", None), ("  ", None)])
