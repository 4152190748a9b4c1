"""Layered annotation workflow: Selection -> Temporal -> Coreference -> Causal -> Done.

A session owns one document's matrix, partition, and causal state, and records
every annotator decision in an append-only action log. The log replays
deterministically against the original document, which is also how sessions
are persisted.
"""
from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum

from . import causal as causal_ops
from . import coref as coref_ops
from .causal import CausalState
from .coref import CorefPartition, FormClusterResult
from .errors import (
    BlockedAdvanceError,
    DocumentError,
    PhaseError,
    SessionFormatError,
    UnknownIdError,
)
from .model import Document, TemporalLabel, document_from_dict, invert
from .temporal import AnnotationDelta, Inferred, RelationMatrix

SAVE_FORMAT_VERSION = 1


class TaskPhase(Enum):
    SELECTION = "selection"
    TEMPORAL = "temporal"
    COREFERENCE = "coreference"
    CAUSAL = "causal"
    DONE = "done"


_PHASE_ORDER = [
    TaskPhase.SELECTION,
    TaskPhase.TEMPORAL,
    TaskPhase.COREFERENCE,
    TaskPhase.CAUSAL,
    TaskPhase.DONE,
]

# log kind -> phase whose manual-step counter it feeds
MANUAL_KINDS = {
    "set-status": TaskPhase.SELECTION,
    "annotate-temporal": TaskPhase.TEMPORAL,
    "form-cluster": TaskPhase.COREFERENCE,
    "record-causes": TaskPhase.CAUSAL,
}


@dataclass
class ActionRecord:
    seq: int
    phase: str
    kind: str
    payload: dict
    timestamp: float

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "phase": self.phase,
            "kind": self.kind,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }


@dataclass
class DownstreamImpact:
    """Coref/causal items whose preconditions broke after a temporal revision."""

    dissolved_clusters: list[str] = field(default_factory=list)
    requeued_mentions: list[str] = field(default_factory=list)
    dropped_links: list[tuple[str, str]] = field(default_factory=list)

    def empty(self) -> bool:
        return not (self.dissolved_clusters or self.requeued_mentions or self.dropped_links)

    def to_dict(self) -> dict:
        return {
            "dissolved_clusters": self.dissolved_clusters,
            "requeued_mentions": self.requeued_mentions,
            "dropped_links": [{"cause": c, "effect": e} for c, e in self.dropped_links],
        }


@dataclass
class TemporalEditResult:
    delta: AnnotationDelta
    impact: DownstreamImpact


class AnnotationSession:
    """Single-annotator, single-document annotation state machine."""

    def __init__(
        self,
        document: Document,
        annotator_id: str,
        session_id: str | None = None,
        _replaying: bool = False,
    ):
        if not document.mentions:
            raise DocumentError("document has no mentions")
        self.session_id = session_id or uuid.uuid4().hex[:12]
        self.annotator_id = annotator_id
        self._original = document.to_dict()
        self.document = document.copy()
        self.partition = CorefPartition()
        self.causal = CausalState()
        self.log: list[ActionRecord] = []
        if any(m.status == "candidate" for m in self.document.mentions):
            self.phase = TaskPhase.SELECTION
        else:
            self.phase = TaskPhase.TEMPORAL
        self.matrix = RelationMatrix([m.id for m in self.document.included_mentions()])
        self._replaying = _replaying

    # -- logging -------------------------------------------------------------

    def _record(self, kind: str, payload: dict) -> None:
        if self._replaying:
            return
        self.log.append(
            ActionRecord(
                seq=len(self.log) + 1,
                phase=self.phase.value,
                kind=kind,
                payload=payload,
                timestamp=time.time(),
            )
        )

    def manual_steps(self) -> dict[str, int]:
        """Manual decisions per phase, straight off the log."""
        counts = {p.value: 0 for p in _PHASE_ORDER if p is not TaskPhase.DONE}
        for rec in self.log:
            phase = MANUAL_KINDS.get(rec.kind)
            if phase is not None:
                counts[phase.value] += 1
        return counts

    # -- phase gates -----------------------------------------------------------

    def _require_phase(self, *phases: TaskPhase) -> None:
        if self.phase not in phases:
            allowed = "/".join(p.value for p in phases)
            raise PhaseError(
                f"operation requires phase {allowed}, session is in {self.phase.value}"
            )

    # -- selection -------------------------------------------------------------

    def set_mention_status(self, mention_id: str, status: str) -> None:
        self._require_phase(TaskPhase.SELECTION)
        if status not in ("included", "excluded"):
            raise UnknownIdError(f"status must be included or excluded, got {status!r}")
        mention = self.document.mention(mention_id)
        mention.status = status
        self._record("set-status", {"mention": mention_id, "status": status})

    # -- temporal ----------------------------------------------------------------

    def annotate_temporal(self, a: str, b: str, label: TemporalLabel) -> TemporalEditResult:
        """Annotate the (a, b) pair, in either orientation, and propagate.

        Runs the closure and conflict check, then re-validates any coref or
        causal decisions whose temporal preconditions the edit broke.
        """
        self._require_phase(TaskPhase.TEMPORAL)
        delta = self.matrix.annotate(a, b, label)
        impact = self._reconcile_downstream()
        self._record("annotate-temporal", {"a": a, "b": b, "label": label.value})
        return TemporalEditResult(delta=delta, impact=impact)

    def _reconcile_downstream(self) -> DownstreamImpact:
        """Flag and re-queue downstream decisions invalidated by a temporal edit."""
        impact = DownstreamImpact()
        for cluster in list(self.partition.clusters):
            members = sorted(cluster.members, key=self.matrix.index_of)
            broken = any(
                self.matrix.label_between(x, y) is not TemporalLabel.EQUAL
                for i, x in enumerate(members)
                for y in members[i + 1 :]
            )
            if broken:
                self.partition.clusters.remove(cluster)
                self.partition.handled -= cluster.members
                impact.dissolved_clusters.append(cluster.cluster_id)
                impact.requeued_mentions.extend(members)
        live = {c.cluster_id: c for c in self.partition.clusters}
        for link in sorted(self.causal.links):
            cause, effect = link
            valid = cause in live and effect in live
            if valid:
                rep_c = live[cause].representative(self.matrix)
                rep_e = live[effect].representative(self.matrix)
                valid = self.matrix.label_between(rep_c, rep_e) is TemporalLabel.BEFORE
            if not valid:
                self.causal.links.discard(link)
                self.causal.handled.discard(effect)
                impact.dropped_links.append(link)
        self.causal.handled &= set(live)
        return impact

    # -- coreference ---------------------------------------------------------------

    def form_cluster(
        self, focal: str, members: set[str], confirm: bool = False
    ) -> FormClusterResult:
        self._require_phase(TaskPhase.COREFERENCE)
        result = coref_ops.form_cluster(
            self.partition, self.matrix, focal, set(members), confirm=confirm
        )
        if result.applied:
            self._record(
                "form-cluster",
                {"focal": focal, "members": sorted(members), "confirm": confirm},
            )
        return result

    # -- causal ---------------------------------------------------------------------

    def record_causes(self, focal: str, causes: set[str]) -> None:
        self._require_phase(TaskPhase.CAUSAL)
        causal_ops.record_causes(
            self.causal, self.partition, self.matrix, focal, set(causes)
        )
        self._record("record-causes", {"focal": focal, "causes": sorted(causes)})

    # -- navigation -------------------------------------------------------------------

    def next_unit(self) -> dict | None:
        """The current phase's next item to present, or None when the phase is done."""
        if self.phase is TaskPhase.SELECTION:
            for m in self.document.mentions:
                if m.status == "candidate":
                    return {"kind": "selection", "mention": m.id}
            return None
        if self.phase is TaskPhase.TEMPORAL:
            pair = self.matrix.next_pair()
            if pair is None:
                return None
            return {"kind": "pair", "a": pair.a, "b": pair.b}
        if self.phase is TaskPhase.COREFERENCE:
            focal = coref_ops.next_unhandled(self.partition, self.matrix)
            if focal is None:
                return None
            candidates = sorted(
                coref_ops.equal_candidates(self.matrix, focal), key=self.matrix.index_of
            )
            return {"kind": "coref", "focal": focal, "candidates": candidates}
        if self.phase is TaskPhase.CAUSAL:
            focal = causal_ops.next_unhandled_causal(self.causal, self.partition, self.matrix)
            if focal is None:
                return None
            return {
                "kind": "causal",
                "focal": focal,
                "candidates": causal_ops.preceding_candidates(
                    self.partition, self.matrix, focal
                ),
            }
        return None

    def _advance_blockers(self) -> list[str]:
        if self.phase is TaskPhase.SELECTION:
            return [
                f"mention {m.id} is unclassified"
                for m in self.document.mentions
                if m.status == "candidate"
            ]
        if self.phase is TaskPhase.TEMPORAL:
            blockers = [
                f"pair ({p.a}, {p.b}) is unannotated"
                for p in self.matrix.pairs()
                if self.matrix.state(p) is None
            ]
            blockers += [
                f"conflict on ({w.pair.a}, {w.pair.b}) via {w.mediator}"
                for w in self.matrix.detect_conflicts()
            ]
            return blockers
        if self.phase is TaskPhase.COREFERENCE:
            focal = coref_ops.next_unhandled(self.partition, self.matrix)
            return [] if focal is None else [f"mention {focal} needs a coreference decision"]
        if self.phase is TaskPhase.CAUSAL:
            focal = causal_ops.next_unhandled_causal(self.causal, self.partition, self.matrix)
            return [] if focal is None else [f"cluster {focal} needs a causal decision"]
        return ["session is already done"]

    def advance_phase(self) -> TaskPhase:
        """Move one phase forward; refuses with the blocking items otherwise."""
        blockers = self._advance_blockers()
        if blockers:
            raise BlockedAdvanceError(
                f"cannot leave {self.phase.value} phase", blocking_items=blockers
            )
        previous = self.phase
        if previous is TaskPhase.SELECTION:
            self._rebuild_matrix()
        elif previous is TaskPhase.COREFERENCE:
            coref_ops.finalize_singletons(self.partition, self.matrix)
        elif previous is TaskPhase.CAUSAL:
            problems = self._overall_check()
            if problems:
                raise BlockedAdvanceError(
                    "overall completeness check failed", blocking_items=problems
                )
        self.phase = _PHASE_ORDER[_PHASE_ORDER.index(previous) + 1]
        self._record("advance-phase", {"from": previous.value, "to": self.phase.value})
        return self.phase

    def revert_phase(self) -> TaskPhase:
        """Navigate one phase back for revision; annotations are kept."""
        idx = _PHASE_ORDER.index(self.phase)
        if idx == 0:
            raise PhaseError("already at the first phase")
        previous = self.phase
        self.phase = _PHASE_ORDER[idx - 1]
        self._record("revise", {"from": previous.value, "to": self.phase.value})
        return self.phase

    def _rebuild_matrix(self) -> None:
        """Re-dimension the matrix to the included set, keeping still-valid direct cells."""
        old = self.matrix
        self.matrix = RelationMatrix([m.id for m in self.document.included_mentions()])
        kept = set(self.matrix.ids)
        for pair, cell in old.direct_cells().items():
            if pair.a in kept and pair.b in kept:
                self.matrix.set_direct(pair, cell.label)
        self.matrix.recompute_closure()

    def _overall_check(self) -> list[str]:
        """Cross-phase completeness and consistency, run before entering Done."""
        problems = [
            f"mention {m.id} is unclassified"
            for m in self.document.mentions
            if m.status == "candidate"
        ]
        status = self.matrix.completion()
        if not status.complete:
            problems.append(
                f"temporal annotation incomplete ({status.unannotated_pairs} unannotated, "
                f"{status.conflicts} conflicts)"
            )
        clustered: dict[str, int] = {}
        for cluster in self.partition.clusters:
            for mid in cluster.members:
                clustered[mid] = clustered.get(mid, 0) + 1
        for mid in self.matrix.ids:
            count = clustered.get(mid, 0)
            if count != 1:
                problems.append(f"mention {mid} is in {count} clusters")
        if status.complete:
            for cluster in self.partition.clusters:
                members = sorted(cluster.members, key=self.matrix.index_of)
                for i, x in enumerate(members):
                    for y in members[i + 1 :]:
                        if self.matrix.label_between(x, y) is not TemporalLabel.EQUAL:
                            problems.append(
                                f"cluster {cluster.cluster_id} pair ({x}, {y}) is not EQUAL"
                            )
            live = {c.cluster_id: c for c in self.partition.clusters}
            for cause, effect in sorted(self.causal.links):
                if cause not in live or effect not in live:
                    problems.append(f"causal link ({cause}, {effect}) references a dead cluster")
                    continue
                label = coref_ops.cluster_relation(self.matrix, live[cause], live[effect])
                if label is not TemporalLabel.BEFORE:
                    problems.append(f"causal link ({cause}, {effect}) is not BEFORE")
        return problems

    # -- persistence ---------------------------------------------------------------------

    def save(self) -> bytes:
        """Serialize as {format_version, document, log}; state is rebuilt by replay."""
        envelope = {
            "format_version": SAVE_FORMAT_VERSION,
            "session_id": self.session_id,
            "annotator_id": self.annotator_id,
            "document": self._original,
            "log": [rec.to_dict() for rec in self.log],
        }
        return json.dumps(envelope, ensure_ascii=False, indent=2).encode("utf-8")

    @classmethod
    def load(cls, raw: bytes | str) -> AnnotationSession:
        try:
            envelope = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise SessionFormatError(f"corrupted session payload: {exc}") from None
        if not isinstance(envelope, dict):
            raise SessionFormatError("session payload must be an object")
        version = envelope.get("format_version")
        if version != SAVE_FORMAT_VERSION:
            raise SessionFormatError(
                f"unsupported session format version: {version!r} "
                f"(expected {SAVE_FORMAT_VERSION})"
            )
        try:
            document = document_from_dict(envelope["document"])
            annotator_id = envelope["annotator_id"]
            session_id = envelope["session_id"]
            log = envelope["log"]
        except (KeyError, DocumentError) as exc:
            raise SessionFormatError(f"invalid session payload: {exc}") from None
        session = cls(document, annotator_id, session_id=session_id, _replaying=True)
        try:
            for item in log:
                record = ActionRecord(
                    seq=item["seq"],
                    phase=item["phase"],
                    kind=item["kind"],
                    payload=item["payload"],
                    timestamp=item["timestamp"],
                )
                session._apply(record)
                session.log.append(record)
        except (KeyError, TypeError) as exc:
            raise SessionFormatError(f"invalid action record: {exc}") from None
        finally:
            session._replaying = False
        return session

    def _apply(self, record: ActionRecord) -> None:
        """Re-execute one logged action during replay."""
        kind, payload = record.kind, record.payload
        if kind == "set-status":
            self.set_mention_status(payload["mention"], payload["status"])
        elif kind == "annotate-temporal":
            self.annotate_temporal(
                payload["a"], payload["b"], TemporalLabel(payload["label"])
            )
        elif kind == "form-cluster":
            self.form_cluster(
                payload["focal"], set(payload["members"]), confirm=payload["confirm"]
            )
        elif kind == "record-causes":
            self.record_causes(payload["focal"], set(payload["causes"]))
        elif kind == "advance-phase":
            self.advance_phase()
        elif kind == "revise":
            self.revert_phase()
        else:
            raise SessionFormatError(f"unknown action kind: {kind!r}")

    def state_fingerprint(self) -> dict:
        """Canonical view of all mutable state; equal fingerprints mean equal sessions."""
        cells = {}
        for pair in self.matrix.pairs():
            cell = self.matrix.state(pair)
            if cell is None:
                continue
            if isinstance(cell, Inferred):
                cells[f"{pair.a}|{pair.b}"] = ["inferred", cell.label.value, list(cell.witness)]
            else:
                cells[f"{pair.a}|{pair.b}"] = ["direct", cell.label.value]
        return {
            "session_id": self.session_id,
            "annotator_id": self.annotator_id,
            "phase": self.phase.value,
            "statuses": {m.id: m.status for m in self.document.mentions},
            "matrix_ids": list(self.matrix.ids),
            "cells": cells,
            "clusters": sorted(
                [c.cluster_id, sorted(c.members)] for c in self.partition.clusters
            ),
            "coref_handled": sorted(self.partition.handled),
            "causal_links": sorted(self.causal.links),
            "causal_handled": sorted(self.causal.handled),
            "log_length": len(self.log),
        }

    # -- export -------------------------------------------------------------------------------

    def export_annotation(self) -> dict:
        """Final annotation document; only available once the session is Done."""
        if self.phase is not TaskPhase.DONE:
            raise PhaseError("export requires the Done phase")
        matrix = self.matrix
        clusters = sorted(
            self.partition.clusters,
            key=lambda c: matrix.index_of(c.representative(matrix)),
        )
        rep = {c.cluster_id: c.representative(matrix) for c in clusters}
        temporal = []
        for i, ca in enumerate(clusters):
            for cb in clusters[i + 1 :]:
                pair_label = coref_ops.cluster_relation(matrix, ca, cb)
                cell = matrix.state(matrix.key(rep[ca.cluster_id], rep[cb.cluster_id])[0])
                temporal.append(
                    {
                        "a": rep[ca.cluster_id],
                        "b": rep[cb.cluster_id],
                        "label": pair_label.value,
                        "provenance": "inferred" if isinstance(cell, Inferred) else "direct",
                    }
                )
        steps = self.manual_steps()
        stats = {
            phase: {"manual_steps": steps[phase], "auto_steps": 0}
            for phase in steps
        }
        stats["temporal"]["auto_steps"] = len(matrix.inferred_cells())
        return {
            "doc_id": self.document.doc_id,
            "mentions": [
                {
                    "id": m.id,
                    "start": m.start,
                    "end": m.end,
                    "surface": m.surface,
                    "order_index": m.order_index,
                }
                for m in self.document.included_mentions()
            ],
            "clusters": [sorted(c.members, key=matrix.index_of) for c in clusters],
            "temporal": temporal,
            "causal": [
                {"cause": rep[c], "effect": rep[e]}
                for c, e in sorted(
                    self.causal.links,
                    key=lambda link: (
                        matrix.index_of(rep[link[0]]),
                        matrix.index_of(rep[link[1]]),
                    ),
                )
            ],
            "stats": stats,
        }


def start_session(
    document: Document, annotator_id: str, session_id: str | None = None
) -> AnnotationSession:
    return AnnotationSession(document, annotator_id, session_id=session_id)


def validate_export(export: dict) -> None:
    """Re-check every engine invariant an export document must satisfy."""
    if not isinstance(export, dict):
        raise SessionFormatError("export must be an object")
    for key in ("doc_id", "mentions", "clusters", "temporal", "causal", "stats"):
        if key not in export:
            raise SessionFormatError(f"export missing field: {key}")

    mentions = export["mentions"]
    ids = [m["id"] for m in mentions]
    if len(set(ids)) != len(ids):
        raise SessionFormatError("export mentions contain duplicate ids")
    order = {m["id"]: m["order_index"] for m in mentions}
    if sorted(order.values()) != list(range(len(mentions))):
        raise SessionFormatError("export mention order indices are not 0..m-1")

    seen: set[str] = set()
    reps: list[str] = []
    for members in export["clusters"]:
        if not members:
            raise SessionFormatError("export contains an empty cluster")
        for mid in members:
            if mid not in order:
                raise SessionFormatError(f"cluster references unknown mention {mid!r}")
            if mid in seen:
                raise SessionFormatError(f"mention {mid!r} appears in two clusters")
            seen.add(mid)
        reps.append(min(members, key=lambda m: order[m]))
    if seen != set(ids):
        raise SessionFormatError("clusters do not cover all included mentions")

    labels: dict[tuple[str, str], str] = {}
    for entry in export["temporal"]:
        a, b, label = entry["a"], entry["b"], entry["label"]
        if a not in reps or b not in reps:
            raise SessionFormatError(f"temporal entry references unknown cluster ({a}, {b})")
        if order[a] >= order[b]:
            raise SessionFormatError(f"temporal entry ({a}, {b}) is not in canonical order")
        if label not in TemporalLabel.__members__:
            raise SessionFormatError(f"invalid temporal label {label!r}")
        if entry["provenance"] not in ("direct", "inferred"):
            raise SessionFormatError(f"invalid provenance {entry['provenance']!r}")
        if (a, b) in labels:
            raise SessionFormatError(f"duplicate temporal entry for ({a}, {b})")
        labels[(a, b)] = label
    expected = len(reps) * (len(reps) - 1) // 2
    if len(labels) != expected:
        raise SessionFormatError(
            f"temporal entries cover {len(labels)} cluster pairs, expected {expected}"
        )

    for link in export["causal"]:
        cause, effect = link["cause"], link["effect"]
        if cause not in reps or effect not in reps:
            raise SessionFormatError("causal link references unknown cluster")
        if order[cause] < order[effect]:
            label = labels[(cause, effect)]
        else:
            label = invert(TemporalLabel(labels[(effect, cause)])).value
        if label != TemporalLabel.BEFORE.value:
            raise SessionFormatError(
                f"causal link ({cause}, {effect}) is not BEFORE (label {label})"
            )

    for phase, counts in export["stats"].items():
        if counts["manual_steps"] < 0 or counts["auto_steps"] < 0:
            raise SessionFormatError(f"negative step count in phase {phase}")
