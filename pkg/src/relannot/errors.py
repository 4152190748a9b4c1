"""Exception hierarchy shared by the annotation engine, service, and CLI."""
from __future__ import annotations


class EngineError(Exception):
    """Base class for all errors raised by the annotation engine."""


class DocumentError(EngineError):
    """A document failed validation; carries the offending mention id when known."""

    def __init__(self, message: str, mention_id: str | None = None):
        super().__init__(message)
        self.mention_id = mention_id


class UnknownIdError(EngineError):
    """A mention, cluster, document, or session id does not exist."""


class PhaseError(EngineError):
    """The operation is not permitted in the session's current phase."""


class BlockedAdvanceError(EngineError):
    """A phase-completion predicate failed; lists the blocking items."""

    def __init__(self, message: str, blocking_items: list[str] | None = None):
        super().__init__(message)
        self.blocking_items = blocking_items or []


class GateViolation(EngineError):
    """A selection fell outside the candidate set derived from the temporal graph."""


class IncompleteAnnotationError(EngineError):
    """The temporal matrix must be complete and conflict-free for this operation."""


class IntegrityError(EngineError):
    """Internal state broke an engine invariant (bug or corrupted state, not annotator error)."""


class SessionFormatError(EngineError):
    """A session save payload or export document is malformed or version-incompatible."""
