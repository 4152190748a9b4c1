"""Simulated-annotator runs: drive a full session with an oracle over a known timeline.

Used to measure workload reduction without human annotators. The oracle always
answers truthfully from the ground truth, so every run must finish complete
and conflict-free.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import coref as coref_ops
from .errors import EngineError
from .metrics import WorkloadReport, workload_from_session
from .model import Document, EventMention, TemporalLabel
from .session import AnnotationSession, TaskPhase, start_session

POLICIES = ("chronological", "random", "from-file")


@dataclass
class SimulationConfig:
    """Same seed and config always reproduce the identical run."""

    n_events: int
    policy: str = "chronological"
    seed: int = 0
    equal_prob: float = 0.15
    vague_prob: float = 0.1
    cause_prob: float = 0.3
    truth_file: str | None = None


@dataclass
class SimulationResult:
    config: SimulationConfig
    session: AnnotationSession
    workload: WorkloadReport
    universes: dict[str, int]
    conflicts: int
    complete: bool
    presented_pairs: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "config": {
                "events": self.config.n_events,
                "policy": self.config.policy,
                "seed": self.config.seed,
            },
            "complete": self.complete,
            "conflicts": self.conflicts,
            "universes": self.universes,
            "workload": self.workload.to_dict(),
            "presented_pairs": [list(p) for p in self.presented_pairs],
        }


def synthetic_document(n: int, doc_id: str = "simulated") -> Document:
    """A document of n included one-word mentions in text order."""
    if n < 1:
        raise EngineError("need at least one event")
    words = [f"e{i + 1}" for i in range(n)]
    text = " ".join(words)
    mentions = []
    offset = 0
    for word in words:
        mentions.append(
            EventMention(
                id=word,
                start=offset,
                end=offset + len(word),
                surface=word,
                status="included",
            )
        )
        offset += len(word) + 1
    for i, m in enumerate(mentions):
        m.order_index = i
    return Document(doc_id=doc_id, text=text, mentions=mentions)


def _chronological_truth(ids: list[str]) -> dict[tuple[str, str], TemporalLabel]:
    return {
        (a, b): TemporalLabel.BEFORE
        for i, a in enumerate(ids)
        for b in ids[i + 1 :]
    }


def _random_timeline_truth(
    ids: list[str], rng: random.Random, equal_prob: float, vague_prob: float
) -> dict[tuple[str, str], TemporalLabel]:
    """Consistent random timeline with controlled EQUAL and VAGUE frequencies.

    Events sit on axes: pairs on different axes are mutually VAGUE, pairs on
    the same axis are ordered by integer start times (ties are EQUAL). Every
    definite path stays within one axis, so the vague pairs can never be
    contradicted by a composed definite label.
    """
    n = len(ids)
    axes = [0 if rng.random() >= vague_prob else i + 1 for i in range(n)]
    times = [0] * n
    t = 0
    for i in range(1, n):
        if rng.random() >= equal_prob:
            t += rng.randint(1, 3)
        times[i] = t
    rng.shuffle(times)
    truth: dict[tuple[str, str], TemporalLabel] = {}
    for i, a in enumerate(ids):
        for j in range(i + 1, n):
            b = ids[j]
            if axes[i] != axes[j]:
                truth[(a, b)] = TemporalLabel.VAGUE
            elif times[i] < times[j]:
                truth[(a, b)] = TemporalLabel.BEFORE
            elif times[i] > times[j]:
                truth[(a, b)] = TemporalLabel.AFTER
            else:
                truth[(a, b)] = TemporalLabel.EQUAL
    return truth


def _file_truth(path: str) -> tuple[list[str], dict[tuple[str, str], TemporalLabel]]:
    with open(path, "rb") as handle:
        obj = json.load(handle)
    try:
        ids = list(obj["mentions"])
        entries = obj["labels"]
    except (KeyError, TypeError) as exc:
        raise EngineError(f"truth file needs 'mentions' and 'labels': {exc}") from None
    index = {m: i for i, m in enumerate(ids)}
    truth: dict[tuple[str, str], TemporalLabel] = {}
    for entry in entries:
        a, b = entry["a"], entry["b"]
        if a not in index or b not in index:
            raise EngineError(f"truth file references unknown mention ({a}, {b})")
        key = (a, b) if index[a] < index[b] else (b, a)
        label = TemporalLabel(entry["label"])
        if index[a] > index[b]:
            label = TemporalLabel.AFTER if label is TemporalLabel.BEFORE else (
                TemporalLabel.BEFORE if label is TemporalLabel.AFTER else label
            )
        truth[key] = label
    expected = len(ids) * (len(ids) - 1) // 2
    if len(truth) != expected:
        raise EngineError(
            f"truth file covers {len(truth)} pairs, expected all {expected}"
        )
    return ids, truth


def build_truth(config: SimulationConfig) -> tuple[Document, dict[tuple[str, str], TemporalLabel]]:
    if config.policy == "from-file":
        if not config.truth_file:
            raise EngineError("from-file policy requires a truth file")
        ids, truth = _file_truth(config.truth_file)
        doc = synthetic_document(len(ids))
        # rename synthetic mentions to the file's ids, keeping text order
        for mention, mid in zip(doc.mentions, ids):
            mention.id = mid
        return doc, truth
    if config.policy not in POLICIES:
        raise EngineError(f"unknown policy: {config.policy!r}")
    doc = synthetic_document(config.n_events)
    ids = [m.id for m in doc.mentions]
    if config.policy == "chronological":
        return doc, _chronological_truth(ids)
    rng = random.Random(config.seed)
    return doc, _random_timeline_truth(ids, rng, config.equal_prob, config.vague_prob)


def run_simulation(config: SimulationConfig) -> SimulationResult:
    """Drive one oracle-annotated session end to end and report the workload."""
    doc, truth = build_truth(config)
    session = start_session(
        doc,
        annotator_id=f"oracle-{config.seed}",
        session_id=f"sim-{config.policy}-{config.n_events}-{config.seed}",
    )
    rng = random.Random(config.seed ^ 0x5EED)

    presented: list[tuple[str, str]] = []
    while (unit := session.next_unit()) is not None:
        a, b = unit["a"], unit["b"]
        presented.append((a, b))
        session.annotate_temporal(a, b, truth[(a, b)])
    session.advance_phase()

    equal_pairs = sum(
        1 for p in session.matrix.pairs()
        if session.matrix.state(p).label is TemporalLabel.EQUAL
    )
    while (unit := session.next_unit()) is not None:
        # oracle policy: co-occurring mentions corefer, so select every candidate
        session.form_cluster(unit["focal"], set(unit["candidates"]))
    session.advance_phase()

    clusters = sorted(
        session.partition.clusters,
        key=lambda c: session.matrix.index_of(c.representative(session.matrix)),
    )
    before_cluster_pairs = 0
    for i, ca in enumerate(clusters):
        for cb in clusters[i + 1 :]:
            if coref_ops.cluster_relation(session.matrix, ca, cb) in (
                TemporalLabel.BEFORE,
                TemporalLabel.AFTER,
            ):
                before_cluster_pairs += 1
    while (unit := session.next_unit()) is not None:
        causes = {c for c in unit["candidates"] if rng.random() < config.cause_prob}
        session.record_causes(unit["focal"], causes)
    session.advance_phase()

    status = session.matrix.completion()
    return SimulationResult(
        config=config,
        session=session,
        workload=workload_from_session(session),
        universes={
            "temporal": session.matrix.total_pairs(),
            "coreference": equal_pairs,
            "causal": before_cluster_pairs,
        },
        conflicts=status.conflicts,
        complete=status.complete and session.phase is TaskPhase.DONE,
        presented_pairs=presented,
    )
