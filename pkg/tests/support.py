"""Shared test machinery: independent oracles, truth generators, session drivers.

The closure oracles here deliberately avoid the engine's Warshall-style scan:
one saturates left-folds of all direct-edge walks, the other enumerates simple
paths outright. Tests compare the engine against these, never the engine
against itself.
"""
from __future__ import annotations

import random

from relannot import Document, EventMention, TemporalLabel, invert
from relannot.session import TaskPhase, start_session
from relannot.temporal import ANNOTATE, RelationMatrix, compose

B, A, E, V = (
    TemporalLabel.BEFORE,
    TemporalLabel.AFTER,
    TemporalLabel.EQUAL,
    TemporalLabel.VAGUE,
)


def doc_from_words(words, statuses=None, doc_id="doc"):
    """Document with one mention per word; ids e1..en in text order."""
    text = " ".join(words)
    mentions = []
    offset = 0
    for i, word in enumerate(words):
        status = statuses[i] if statuses else "included"
        mentions.append(
            EventMention(
                id=f"e{i + 1}",
                start=offset,
                end=offset + len(word),
                surface=word,
                order_index=i,
                status=status,
            )
        )
        offset += len(word) + 1
    return Document(doc_id=doc_id, text=text, mentions=mentions)


def fig_doc():
    """The 4-event traffic-story document used across the worked examples."""
    return doc_from_words(["accident", "collided", "damage", "responded"])


# -- ground-truth timelines ----------------------------------------------------


def consistent_timeline(ids, rng, equal_prob=0.2, vague_prob=0.15):
    """Random consistent truth: per-event axes (cross-axis = VAGUE) + tied times.

    Returns {canonical (a, b): label}. Any subset of these labels is free of
    conflicts because definite paths never leave an axis.
    """
    n = len(ids)
    axes = [0 if rng.random() >= vague_prob else i + 1 for i in range(n)]
    ticks = [0]
    for _ in range(1, n):
        ticks.append(ticks[-1] if rng.random() < equal_prob else ticks[-1] + 1)
    rng.shuffle(ticks)
    truth = {}
    for i in range(n):
        for j in range(i + 1, n):
            if axes[i] != axes[j]:
                truth[(ids[i], ids[j])] = V
            elif ticks[i] < ticks[j]:
                truth[(ids[i], ids[j])] = B
            elif ticks[i] > ticks[j]:
                truth[(ids[i], ids[j])] = A
            else:
                truth[(ids[i], ids[j])] = E
    return truth


def random_labels(ids, rng):
    """Arbitrary (typically inconsistent) labels for every canonical pair."""
    labels = [B, A, E, V]
    return {
        (ids[i], ids[j]): rng.choice(labels)
        for i in range(len(ids))
        for j in range(i + 1, len(ids))
    }


def matrix_with_direct(ids, direct):
    m = RelationMatrix(ids)
    for (a, b), label in direct.items():
        m.set_direct(m.key(a, b)[0], label)
    m.recompute_closure()
    return m


# -- independent closure oracles -----------------------------------------------


def walk_label_saturation(ids, direct):
    """Every label reachable by left-folding a walk of direct edges, per ordered pair.

    Incremental path-length saturation: start from single edges and keep
    extending walks by one direct hop until no new (pair, label) appears.
    Order-independent by construction.
    """
    edges = {}
    for (a, b), label in direct.items():
        edges[(a, b)] = label
        edges[(b, a)] = invert(label)
    reach = {
        pair: {label} for pair, label in edges.items() if label is not V
    }
    changed = True
    while changed:
        changed = False
        for (x, y), labels in list(reach.items()):
            for (y2, z), hop in edges.items():
                if y2 != y or z == x or hop is V:
                    continue
                for label in list(labels):
                    out = compose(label, hop)
                    if out is ANNOTATE:
                        continue
                    bucket = reach.setdefault((x, z), set())
                    if out not in bucket:
                        bucket.add(out)
                        changed = True
    return reach


def oracle_closure(ids, direct):
    """Expected closure for a consistent direct set: {canonical pair: label}.

    A pair resolves to its direct label, or to the unique label derivable by
    any walk of direct edges; pairs with no derivation stay absent.
    """
    reach = walk_label_saturation(ids, direct)
    out = dict(direct)
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if (a, b) in out:
                continue
            labels = set(reach.get((a, b), set()))
            labels |= {invert(l) for l in reach.get((b, a), set())}
            if not labels:
                continue
            assert len(labels) == 1, f"ambiguous derivation for {(a, b)}: {labels}"
            out[(a, b)] = labels.pop()
    return out


def simple_path_closure(ids, direct):
    """Same contract as oracle_closure, by raw DFS over simple paths.

    A path composes definitely iff it has no VAGUE hop and not both BEFORE and
    AFTER hops; the result is BEFORE/AFTER if present, else EQUAL. Exponential;
    keep n small.
    """
    edges = {}
    for (a, b), label in direct.items():
        edges.setdefault(a, {})[b] = label
        edges.setdefault(b, {})[a] = invert(label)

    def search(node, target, seen, has_b, has_a):
        if node == target:
            return {B} if has_b else ({A} if has_a else {E})
        found = set()
        for nxt, hop in edges.get(node, {}).items():
            if nxt in seen or hop is V:
                continue
            nb, na = has_b or hop is B, has_a or hop is A
            if nb and na:
                continue
            found |= search(nxt, target, seen | {nxt}, nb, na)
        return found

    out = dict(direct)
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            if (a, b) in out:
                continue
            labels = search(a, b, {a}, False, False)
            if labels:
                assert len(labels) == 1, f"ambiguous paths for {(a, b)}: {labels}"
                out[(a, b)] = labels.pop()
    return out


def matrix_cells_as_labels(matrix):
    """{canonical (a, b): label} over all resolved cells."""
    out = {}
    for pair in matrix.pairs():
        cell = matrix.state(pair)
        if cell is not None:
            out[(pair.a, pair.b)] = cell.label
    return out


# -- oracle-annotator session driving ---------------------------------------------


def drive_temporal(session, truth, max_steps=10_000):
    """Answer every presented pair truthfully; returns the presented pairs."""
    presented = []
    for _ in range(max_steps):
        unit = session.next_unit()
        if unit is None:
            return presented
        presented.append((unit["a"], unit["b"]))
        session.annotate_temporal(unit["a"], unit["b"], truth[(unit["a"], unit["b"])])
    raise AssertionError("temporal phase did not terminate")


def drive_session(session, truth, rng, stop_after=None, cause_prob=0.3, gate_check=None):
    """Run an oracle annotator to Done, optionally stopping after N decisions.

    gate_check, when given, is called as gate_check(session, unit) before each
    coref/causal decision.
    """
    decisions = 0

    def budget_left():
        return stop_after is None or decisions < stop_after

    while session.phase is TaskPhase.SELECTION and budget_left():
        unit = session.next_unit()
        if unit is None:
            session.advance_phase()
            break
        session.set_mention_status(unit["mention"], "included")
        decisions += 1
    while session.phase is TaskPhase.TEMPORAL and budget_left():
        unit = session.next_unit()
        if unit is None:
            session.advance_phase()
            break
        session.annotate_temporal(unit["a"], unit["b"], truth[(unit["a"], unit["b"])])
        decisions += 1
    while session.phase is TaskPhase.COREFERENCE and budget_left():
        unit = session.next_unit()
        if unit is None:
            session.advance_phase()
            break
        if gate_check is not None:
            gate_check(session, unit)
        session.form_cluster(unit["focal"], set(unit["candidates"]))
        decisions += 1
    while session.phase is TaskPhase.CAUSAL and budget_left():
        unit = session.next_unit()
        if unit is None:
            session.advance_phase()
            break
        if gate_check is not None:
            gate_check(session, unit)
        causes = {c for c in unit["candidates"] if rng.random() < cause_prob}
        session.record_causes(unit["focal"], causes)
        decisions += 1
    return session


def random_session(seed, n_range=(2, 10), with_selection=False):
    """Seeded random document + truth + fresh session, for randomized suites."""
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    words = [f"w{i}" for i in range(n)]
    statuses = ["candidate"] * n if with_selection else ["included"] * n
    doc = doc_from_words(words, statuses=statuses, doc_id=f"doc-{seed}")
    ids = [m.id for m in doc.mentions]
    truth = consistent_timeline(ids, rng, equal_prob=0.25, vague_prob=0.15)
    session = start_session(doc, annotator_id=f"ann-{seed}", session_id=f"s{seed}")
    return session, truth, rng
