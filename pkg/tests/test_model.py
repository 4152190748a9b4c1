import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relannot import (
    DocumentError,
    TemporalLabel,
    UnknownIdError,
    canonical_pair,
    invert,
    parse_document,
    serialize_document,
)
from support import doc_from_words


def doc_bytes(**overrides):
    base = {
        "doc_id": "d1",
        "text": "A hit B.",
        "mentions": [{"id": "m1", "start": 2, "end": 5, "surface": "hit"}],
    }
    base.update(overrides)
    return json.dumps(base).encode()


def test_parse_single_mention():
    doc = parse_document(doc_bytes())
    assert len(doc.mentions) == 1
    assert doc.mentions[0].order_index == 0
    assert doc.mentions[0].surface == "hit"
    assert doc.mentions[0].status == "candidate"


def test_span_out_of_bounds():
    bad = doc_bytes(mentions=[{"id": "m1", "start": 2, "end": 99, "surface": "hit"}])
    with pytest.raises(DocumentError, match="span out of bounds") as exc:
        parse_document(bad)
    assert exc.value.mention_id == "m1"


def test_mentions_resorted_by_offset():
    raw = doc_bytes(
        text="zero one two three four",
        mentions=[
            {"id": "late", "start": 9, "end": 12, "surface": "two"},
            {"id": "early", "start": 5, "end": 8, "surface": "one"},
        ],
    )
    doc = parse_document(raw)
    assert [m.id for m in doc.mentions] == ["early", "late"]
    assert doc.mention("early").order_index == 0
    assert doc.mention("late").order_index == 1


def test_duplicate_mention_id():
    raw = doc_bytes(
        mentions=[
            {"id": "m1", "start": 0, "end": 1, "surface": "A"},
            {"id": "m1", "start": 2, "end": 5, "surface": "hit"},
        ]
    )
    with pytest.raises(DocumentError, match="duplicate"):
        parse_document(raw)


def test_surface_mismatch():
    raw = doc_bytes(mentions=[{"id": "m1", "start": 2, "end": 5, "surface": "hat"}])
    with pytest.raises(DocumentError, match="surface"):
        parse_document(raw)


def test_malformed_json():
    with pytest.raises(DocumentError, match="malformed"):
        parse_document(b"{not json")


def test_missing_fields():
    with pytest.raises(DocumentError, match="missing required field"):
        parse_document(b'{"doc_id": "d", "text": "x"}')


def test_tie_breaking_same_start():
    raw = doc_bytes(
        text="abc",
        mentions=[
            {"id": "z", "start": 0, "end": 3, "surface": "abc"},
            {"id": "a", "start": 0, "end": 2, "surface": "ab"},
        ],
    )
    doc = parse_document(raw)
    # same start: shorter span first, then id
    assert [m.id for m in doc.mentions] == ["a", "z"]


def test_round_trip():
    raw = doc_bytes(
        temporal_entities=[{"start": 0, "end": 1}],
        mentions=[{"id": "m1", "start": 2, "end": 5, "surface": "hit", "status": "included"}],
    )
    doc = parse_document(raw)
    again = parse_document(serialize_document(doc))
    assert again == doc


@given(st.integers(min_value=1, max_value=12), st.randoms(use_true_random=False))
def test_order_index_is_permutation(n, rnd):
    words = [f"w{i}" for i in range(n)]
    doc = doc_from_words(words)
    obj = doc.to_dict()
    rnd.shuffle(obj["mentions"])
    parsed = parse_document(json.dumps(obj).encode())
    assert sorted(m.order_index for m in parsed.mentions) == list(range(n))
    starts = [m.start for m in parsed.mentions]
    assert starts == sorted(starts)


@pytest.mark.parametrize(
    "label,expected",
    [
        (TemporalLabel.BEFORE, TemporalLabel.AFTER),
        (TemporalLabel.AFTER, TemporalLabel.BEFORE),
        (TemporalLabel.EQUAL, TemporalLabel.EQUAL),
        (TemporalLabel.VAGUE, TemporalLabel.VAGUE),
    ],
)
def test_invert(label, expected):
    assert invert(label) is expected
    assert invert(invert(label)) is label


def test_canonical_pair_orientations():
    doc = doc_from_words(["a", "b", "c"])
    key, forward = canonical_pair("e1", "e3", doc)
    assert (key.a, key.b, forward) == ("e1", "e3", True)
    key, forward = canonical_pair("e3", "e1", doc)
    assert (key.a, key.b, forward) == ("e1", "e3", False)


def test_canonical_pair_errors():
    doc = doc_from_words(["a", "b", "c"])
    with pytest.raises(UnknownIdError):
        canonical_pair("e1", "e1", doc)
    with pytest.raises(UnknownIdError):
        canonical_pair("e1", "nope", doc)
    doc.mention("e2").status = "excluded"
    with pytest.raises(UnknownIdError, match="not included"):
        canonical_pair("e1", "e2", doc)
