"""Domain types and document ingestion: mentions, documents, labels, pair keys.

All engines share these value types. Documents are immutable after parsing
except for mention status, which the selection step flips between
candidate/included/excluded.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import DocumentError, UnknownIdError

MENTION_STATUSES = ("candidate", "included", "excluded")


class TemporalLabel(Enum):
    """Start-time order between two events; VAGUE means undeterminable from the text."""

    BEFORE = "BEFORE"
    AFTER = "AFTER"
    EQUAL = "EQUAL"
    VAGUE = "VAGUE"

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return self.value


def invert(label: TemporalLabel) -> TemporalLabel:
    """Label of the reversed pair orientation: BEFORE<->AFTER, EQUAL and VAGUE are symmetric."""
    if label is TemporalLabel.BEFORE:
        return TemporalLabel.AFTER
    if label is TemporalLabel.AFTER:
        return TemporalLabel.BEFORE
    return label


@dataclass
class EventMention:
    """A targeted event span in the document text.

    start is inclusive, end exclusive (character offsets). order_index is the
    0-based rank by start offset (ties broken by end offset, then id).
    """

    id: str
    start: int
    end: int
    surface: str
    order_index: int = -1
    status: str = "candidate"

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "start": self.start,
            "end": self.end,
            "surface": self.surface,
            "status": self.status,
        }


@dataclass
class Document:
    """A text with its targeted event mentions, sorted by text order."""

    doc_id: str
    text: str
    mentions: list[EventMention]
    temporal_entities: list[tuple[int, int]] = field(default_factory=list)

    def mention(self, mention_id: str) -> EventMention:
        for m in self.mentions:
            if m.id == mention_id:
                return m
        raise UnknownIdError(f"unknown mention id: {mention_id!r}")

    def included_mentions(self) -> list[EventMention]:
        return [m for m in self.mentions if m.status == "included"]

    def order_of(self, mention_id: str) -> int:
        return self.mention(mention_id).order_index

    def to_dict(self) -> dict:
        out: dict = {
            "doc_id": self.doc_id,
            "text": self.text,
            "mentions": [m.to_dict() for m in self.mentions],
        }
        if self.temporal_entities:
            out["temporal_entities"] = [
                {"start": s, "end": e} for s, e in self.temporal_entities
            ]
        return out

    def copy(self) -> Document:
        return document_from_dict(self.to_dict())


@dataclass(frozen=True)
class PairKey:
    """Canonical text-order orientation of a mention pair: a precedes b in the text.

    The reverse orientation is always represented by label inversion, never by
    a second key.
    """

    a: str
    b: str

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b}


def canonical_pair(a: str, b: str, doc: Document) -> tuple[PairKey, bool]:
    """Return the text-order key for (a, b) and whether the arguments were already in that order.

    Both mentions must be included; the diagonal (a == b) is forbidden.
    """
    if a == b:
        raise UnknownIdError(f"pair requires two distinct mentions, got {a!r} twice")
    ma, mb = doc.mention(a), doc.mention(b)
    for m in (ma, mb):
        if m.status != "included":
            raise UnknownIdError(f"mention {m.id!r} is not included (status={m.status})")
    if ma.order_index < mb.order_index:
        return PairKey(a, b), True
    return PairKey(b, a), False


def _assign_order(mentions: list[EventMention]) -> list[EventMention]:
    ordered = sorted(mentions, key=lambda m: (m.start, m.end, m.id))
    for i, m in enumerate(ordered):
        m.order_index = i
    return ordered


def document_from_dict(obj: dict) -> Document:
    """Validate a decoded document object and return a sorted, indexed Document."""
    if not isinstance(obj, dict):
        raise DocumentError("document must be an object")
    try:
        doc_id = obj["doc_id"]
        text = obj["text"]
        raw_mentions = obj["mentions"]
    except KeyError as exc:
        raise DocumentError(f"missing required field: {exc.args[0]}") from None
    if not isinstance(doc_id, str) or not doc_id:
        raise DocumentError("doc_id must be a non-empty string")
    if not isinstance(text, str):
        raise DocumentError("text must be a string")
    if not isinstance(raw_mentions, list):
        raise DocumentError("mentions must be an array")

    mentions: list[EventMention] = []
    seen_ids: set[str] = set()
    for item in raw_mentions:
        if not isinstance(item, dict):
            raise DocumentError("each mention must be an object")
        mid = item.get("id")
        if not isinstance(mid, str) or not mid:
            raise DocumentError("mention id must be a non-empty string")
        if mid in seen_ids:
            raise DocumentError(f"duplicate mention id: {mid!r}", mention_id=mid)
        seen_ids.add(mid)
        start, end = item.get("start"), item.get("end")
        if not isinstance(start, int) or not isinstance(end, int):
            raise DocumentError(f"mention {mid!r}: start/end must be integers", mention_id=mid)
        if not (0 <= start < end <= len(text)):
            raise DocumentError(f"mention {mid!r}: span out of bounds", mention_id=mid)
        surface = item.get("surface")
        if surface != text[start:end]:
            raise DocumentError(
                f"mention {mid!r}: surface does not match text slice "
                f"({surface!r} != {text[start:end]!r})",
                mention_id=mid,
            )
        status = item.get("status", "candidate")
        if status not in MENTION_STATUSES:
            raise DocumentError(f"mention {mid!r}: invalid status {status!r}", mention_id=mid)
        mentions.append(EventMention(id=mid, start=start, end=end, surface=surface, status=status))

    entities: list[tuple[int, int]] = []
    for span in obj.get("temporal_entities") or []:
        if not isinstance(span, dict) or "start" not in span or "end" not in span:
            raise DocumentError("temporal_entities entries must be {start, end} objects")
        s, e = span["start"], span["end"]
        if not isinstance(s, int) or not isinstance(e, int) or not (0 <= s < e <= len(text)):
            raise DocumentError("temporal entity span out of bounds")
        entities.append((s, e))

    return Document(
        doc_id=doc_id,
        text=text,
        mentions=_assign_order(mentions),
        temporal_entities=entities,
    )


def parse_document(raw: bytes | str) -> Document:
    """Parse and validate one document file (UTF-8 JSON)."""
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DocumentError(f"malformed document file: {exc}") from None
    return document_from_dict(obj)


def serialize_document(doc: Document) -> bytes:
    """Inverse of parse_document (round-trips through to_dict)."""
    return json.dumps(doc.to_dict(), ensure_ascii=False, indent=2).encode("utf-8")
