"""Pair-relation matrix: composition table, transitive closure, conflicts, prioritization.

The matrix stores one cell per canonical (text-order) mention pair. Cells are
either Direct (annotator-asserted), Inferred (derived by composing direct
labels along a witness path), or absent (unannotated). Inferred cells are
derived state: they are rebuilt from scratch from the Direct cells after every
edit, so revisions can never leave stale inferences behind.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

from .errors import UnknownIdError
from .model import PairKey, TemporalLabel, invert


class Annotate(Enum):
    """Composition outcome licensing no inference; the pair needs manual judgment.

    Deliberately not a TemporalLabel so it can never be stored in a cell.
    """

    ANNOTATE = "ANNOTATE"


ANNOTATE = Annotate.ANNOTATE

_B, _A, _E, _V = (
    TemporalLabel.BEFORE,
    TemporalLabel.AFTER,
    TemporalLabel.EQUAL,
    TemporalLabel.VAGUE,
)

# Constraint table over start-time relations: given {i,k} and {k,j}, the
# relation of {i,j}. Rows 1-7 license an inference; rows 8-16 do not.
_COMPOSITION: dict[tuple[TemporalLabel, TemporalLabel], TemporalLabel | Annotate] = {
    (_B, _B): _B,
    (_B, _E): _B,
    (_E, _B): _B,
    (_A, _A): _A,
    (_A, _E): _A,
    (_E, _A): _A,
    (_E, _E): _E,
    (_B, _A): ANNOTATE,
    (_A, _B): ANNOTATE,
    (_V, _V): ANNOTATE,
    (_E, _V): ANNOTATE,
    (_V, _E): ANNOTATE,
    (_B, _V): ANNOTATE,
    (_V, _B): ANNOTATE,
    (_A, _V): ANNOTATE,
    (_V, _A): ANNOTATE,
}


def compose(r1: TemporalLabel, r2: TemporalLabel) -> TemporalLabel | Annotate:
    """Compose the relation i->k with k->j into the implied relation i->j."""
    return _COMPOSITION[(r1, r2)]


def is_definite(label: TemporalLabel | None) -> bool:
    """Definite labels (BEFORE/AFTER/EQUAL) can participate in inference; VAGUE cannot."""
    return label is not None and label is not TemporalLabel.VAGUE


@dataclass(frozen=True)
class Direct:
    """Annotator-asserted cell."""

    label: TemporalLabel


@dataclass(frozen=True)
class Inferred:
    """Cell derived by composing Direct labels along the witness path.

    witness lists the mediator mention ids between the pair's endpoints; every
    consecutive hop along endpoint->witness...->endpoint is a Direct cell.
    """

    label: TemporalLabel
    witness: tuple[str, ...]


CellState = Direct | Inferred


@dataclass(frozen=True)
class ConflictWitness:
    """A triple (i, k, j) whose composed label contradicts the label held for (i, j).

    stored_label is the label currently held for the pair (a Direct or Inferred
    cell, or the label implied by an earlier mediator when two paths disagree
    over an unannotated pair).
    """

    pair: PairKey
    mediator: str
    stored_label: TemporalLabel
    composed_label: TemporalLabel
    leg_labels: tuple[TemporalLabel, TemporalLabel]
    leg_states: tuple[CellState, CellState]

    def path(self) -> tuple[str, str, str]:
        return (self.pair.a, self.mediator, self.pair.b)

    def to_dict(self) -> dict:
        return {
            "pair": self.pair.to_dict(),
            "mediator": self.mediator,
            "stored_label": self.stored_label.value,
            "composed_label": self.composed_label.value,
            "leg_labels": [l.value for l in self.leg_labels],
            "path": list(self.path()),
        }


@dataclass
class CompletionStatus:
    resolved_pairs: int
    unannotated_pairs: int
    conflicts: int
    complete: bool

    def to_dict(self) -> dict:
        return {
            "resolved_pairs": self.resolved_pairs,
            "unannotated_pairs": self.unannotated_pairs,
            "conflicts": self.conflicts,
            "complete": self.complete,
        }


@dataclass
class AnnotationDelta:
    """Result of one manual annotation: what got auto-annotated, what now conflicts."""

    pair: PairKey
    label: TemporalLabel
    inferred: list[tuple[PairKey, TemporalLabel]] = field(default_factory=list)
    conflicts: list[ConflictWitness] = field(default_factory=list)


class RelationMatrix:
    """Upper-triangular store of all pair states over the included mentions.

    Owned by exactly one session; reads are safe to share, mutations must be
    serialized by the owner.
    """

    def __init__(self, mention_ids: Sequence[str]):
        self.ids: tuple[str, ...] = tuple(mention_ids)
        if len(set(self.ids)) != len(self.ids):
            raise UnknownIdError("duplicate mention ids in matrix")
        self._index: dict[str, int] = {mid: i for i, mid in enumerate(self.ids)}
        self._cells: dict[PairKey, CellState] = {}
        self._conflict_cache: list[ConflictWitness] | None = None

    # -- basic reads -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.ids)

    def total_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    def index_of(self, mention_id: str) -> int:
        try:
            return self._index[mention_id]
        except KeyError:
            raise UnknownIdError(f"mention {mention_id!r} is not in the matrix") from None

    def key(self, a: str, b: str) -> tuple[PairKey, bool]:
        """Canonical key for (a, b) plus whether that orientation was already canonical."""
        ia, ib = self.index_of(a), self.index_of(b)
        if ia == ib:
            raise UnknownIdError(f"pair requires two distinct mentions, got {a!r} twice")
        if ia < ib:
            return PairKey(a, b), True
        return PairKey(b, a), False

    def pairs(self) -> Iterator[PairKey]:
        """All canonical pairs in ascending (first index, second index) order."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield PairKey(self.ids[i], self.ids[j])

    def state(self, pair: PairKey) -> CellState | None:
        return self._cells.get(pair)

    def label_between(self, a: str, b: str) -> TemporalLabel | None:
        """Resolved label read in the a->b direction, or None if unannotated."""
        pair, forward = self.key(a, b)
        cell = self._cells.get(pair)
        if cell is None:
            return None
        return cell.label if forward else invert(cell.label)

    def direct_cells(self) -> dict[PairKey, Direct]:
        return {k: v for k, v in self._cells.items() if isinstance(v, Direct)}

    def inferred_cells(self) -> dict[PairKey, Inferred]:
        return {k: v for k, v in self._cells.items() if isinstance(v, Inferred)}

    # -- mutation ----------------------------------------------------------

    def annotate(self, a: str, b: str, label: TemporalLabel) -> AnnotationDelta:
        """Record a manual annotation of the (a, b) pair read in that direction.

        Overwrites any prior Direct or Inferred state, recomputes the closure,
        and reports the newly auto-annotated pairs and any conflicts.
        """
        if not isinstance(label, TemporalLabel):
            raise UnknownIdError(f"not a temporal label: {label!r}")
        pair, forward = self.key(a, b)
        stored = label if forward else invert(label)
        before = set(self._cells)
        self._cells[pair] = Direct(stored)
        self.recompute_closure()
        inferred = [
            (p, c.label)
            for p, c in sorted(
                self.inferred_cells().items(),
                key=lambda kv: (self.index_of(kv[0].a), self.index_of(kv[0].b)),
            )
            if p not in before
        ]
        return AnnotationDelta(
            pair=pair,
            label=stored,
            inferred=inferred,
            conflicts=self.detect_conflicts(),
        )

    def set_direct(self, pair: PairKey, label: TemporalLabel) -> None:
        """Low-level direct write without closure; callers must recompute afterwards."""
        if pair.a not in self._index or pair.b not in self._index:
            raise UnknownIdError(f"pair {pair} is not in the matrix")
        self._cells[pair] = Direct(label)
        self._conflict_cache = None

    def _oriented(self, i: int, j: int) -> tuple[TemporalLabel, tuple[str, ...], CellState] | None:
        """Label, witness path, and cell for ids[i]->ids[j], or None if unannotated."""
        if i < j:
            cell = self._cells.get(PairKey(self.ids[i], self.ids[j]))
            if cell is None:
                return None
            witness = cell.witness if isinstance(cell, Inferred) else ()
            return cell.label, witness, cell
        cell = self._cells.get(PairKey(self.ids[j], self.ids[i]))
        if cell is None:
            return None
        witness = tuple(reversed(cell.witness)) if isinstance(cell, Inferred) else ()
        return invert(cell.label), witness, cell

    def recompute_closure(self) -> None:
        """Rebuild every Inferred cell from the Direct cells (fixpoint).

        Scans triples in Warshall order (ascending mediator, then pair indices)
        repeatedly until stable, so witnesses are deterministic. Direct cells
        are never modified; contradictions are left for detect_conflicts.
        """
        self._cells = {p: c for p, c in self._cells.items() if isinstance(c, Direct)}
        self._conflict_cache = None
        n = self.n
        changed = True
        while changed:
            changed = False
            for k in range(n):
                for i in range(n):
                    if i == k:
                        continue
                    leg1 = self._oriented(i, k)
                    if leg1 is None or not is_definite(leg1[0]):
                        continue
                    for j in range(i + 1, n):
                        if j == k:
                            continue
                        pair = PairKey(self.ids[i], self.ids[j])
                        if pair in self._cells:
                            continue
                        leg2 = self._oriented(k, j)
                        if leg2 is None or not is_definite(leg2[0]):
                            continue
                        composed = compose(leg1[0], leg2[0])
                        if composed is ANNOTATE:
                            continue
                        witness = leg1[1] + (self.ids[k],) + leg2[1]
                        self._cells[pair] = Inferred(composed, witness)
                        changed = True

    # -- consistency -------------------------------------------------------

    def detect_conflicts(self) -> list[ConflictWitness]:
        """Every triple whose definite composition contradicts the pair's held label.

        Includes a Direct VAGUE contradicted by a definite composition, and
        two mediator paths implying different definite labels for a pair that
        is still unannotated (possible only before the closure has run).
        """
        if self._conflict_cache is not None:
            return list(self._conflict_cache)
        out: list[ConflictWitness] = []
        implied: dict[PairKey, TemporalLabel] = {}
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                pair = PairKey(self.ids[i], self.ids[j])
                cell = self._cells.get(pair)
                for k in range(n):
                    if k in (i, j):
                        continue
                    leg1 = self._oriented(i, k)
                    leg2 = self._oriented(k, j)
                    if leg1 is None or leg2 is None:
                        continue
                    if not (is_definite(leg1[0]) and is_definite(leg2[0])):
                        continue
                    composed = compose(leg1[0], leg2[0])
                    if composed is ANNOTATE:
                        continue
                    if cell is not None:
                        if cell.label != composed:
                            out.append(
                                ConflictWitness(
                                    pair=pair,
                                    mediator=self.ids[k],
                                    stored_label=cell.label,
                                    composed_label=composed,
                                    leg_labels=(leg1[0], leg2[0]),
                                    leg_states=(leg1[2], leg2[2]),
                                )
                            )
                    else:
                        prior = implied.get(pair)
                        if prior is None:
                            implied[pair] = composed
                        elif prior != composed:
                            out.append(
                                ConflictWitness(
                                    pair=pair,
                                    mediator=self.ids[k],
                                    stored_label=prior,
                                    composed_label=composed,
                                    leg_labels=(leg1[0], leg2[0]),
                                    leg_states=(leg1[2], leg2[2]),
                                )
                            )
        self._conflict_cache = out
        return list(out)

    # -- prioritization and progress ----------------------------------------

    def next_pair(self) -> PairKey | None:
        """Next pair to present: depth-first-style walk over the unannotated pairs.

        Take the first unannotated pair in text order, then present the last
        unannotated pair that shares its second node (maximizing the chance
        that annotating it closes the first pair transitively).
        """
        pending = [p for p in self.pairs() if p not in self._cells]
        if not pending:
            return None
        first = pending[0]
        sharing = [p for p in pending if p.b == first.b]
        return sharing[-1]

    def completion(self) -> CompletionStatus:
        resolved = len(self._cells)
        unannotated = self.total_pairs() - resolved
        conflicts = len(self.detect_conflicts())
        return CompletionStatus(
            resolved_pairs=resolved,
            unannotated_pairs=unannotated,
            conflicts=conflicts,
            complete=(unannotated == 0 and conflicts == 0),
        )
