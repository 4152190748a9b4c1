"""Coreference clustering gated on the temporal EQUAL pairs.

Only temporally co-occurring mentions can corefer, so the decision universe is
exactly the EQUAL pairs of the completed matrix. Clusters are built one focal
mention at a time; mentions never clustered become singletons at finalization.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    BlockedAdvanceError,
    GateViolation,
    IncompleteAnnotationError,
    IntegrityError,
    UnknownIdError,
)
from .model import TemporalLabel
from .temporal import RelationMatrix


@dataclass
class Cluster:
    """One real-world event: a non-empty set of coreferring mentions."""

    cluster_id: str
    members: set[str]

    def representative(self, matrix: RelationMatrix) -> str:
        """Earliest member in text order; doubles as the cluster's stable export id."""
        return min(self.members, key=matrix.index_of)

    def to_dict(self, matrix: RelationMatrix) -> dict:
        members = sorted(self.members, key=matrix.index_of)
        return {
            "id": self.cluster_id,
            "members": members,
            "representative": members[0],
        }


@dataclass
class MembershipConflict:
    """Selected mentions that already sit in a different cluster; needs confirmation."""

    focal: str
    moves: list[tuple[str, str]]  # (mention_id, current cluster_id)

    def to_dict(self) -> dict:
        return {
            "focal": self.focal,
            "moves": [{"mention": m, "from_cluster": c} for m, c in self.moves],
        }


@dataclass
class FormClusterResult:
    applied: bool
    cluster: Cluster | None = None
    conflict: MembershipConflict | None = None


@dataclass
class CorefPartition:
    """Disjoint clusters over the included mentions plus the handled-focal set."""

    clusters: list[Cluster] = field(default_factory=list)
    handled: set[str] = field(default_factory=set)
    _seq: int = 0

    def cluster_of(self, mention_id: str) -> Cluster | None:
        for c in self.clusters:
            if mention_id in c.members:
                return c
        return None

    def cluster_by_id(self, cluster_id: str) -> Cluster:
        for c in self.clusters:
            if c.cluster_id == cluster_id:
                return c
        raise UnknownIdError(f"unknown cluster id: {cluster_id!r}")

    def clustered_mentions(self) -> set[str]:
        out: set[str] = set()
        for c in self.clusters:
            out |= c.members
        return out

    def new_cluster_id(self) -> str:
        self._seq += 1
        return f"c{self._seq}"


def _require_complete(matrix: RelationMatrix) -> None:
    status = matrix.completion()
    if not status.complete:
        raise IncompleteAnnotationError(
            "temporal annotation must be complete and conflict-free "
            f"({status.unannotated_pairs} unannotated, {status.conflicts} conflicts)"
        )


def equal_candidates(matrix: RelationMatrix, focal: str) -> set[str]:
    """All mentions whose resolved relation with the focal mention is EQUAL."""
    _require_complete(matrix)
    matrix.index_of(focal)
    return {
        other
        for other in matrix.ids
        if other != focal and matrix.label_between(focal, other) is TemporalLabel.EQUAL
    }


def form_cluster(
    partition: CorefPartition,
    matrix: RelationMatrix,
    focal: str,
    selected: set[str],
    confirm: bool = False,
) -> FormClusterResult:
    """Cluster the focal mention with the selected co-occurring mentions.

    An empty selection just marks the focal handled. If any implicated mention
    already belongs to a different cluster, nothing changes until the caller
    confirms; on confirmation the mention is moved (its old cluster keeps the
    rest of its members).
    """
    candidates = equal_candidates(matrix, focal)
    stray = selected - candidates
    if stray:
        raise GateViolation(
            f"selection outside the co-occurring candidates of {focal!r}: {sorted(stray)}"
        )

    members = {focal} | set(selected)
    moves: list[tuple[str, str]] = []
    for mid in sorted(members, key=matrix.index_of):
        current = partition.cluster_of(mid)
        if current is not None and current.members != members:
            moves.append((mid, current.cluster_id))
    if moves and not confirm:
        return FormClusterResult(
            applied=False, conflict=MembershipConflict(focal=focal, moves=moves)
        )

    if not selected:
        current = partition.cluster_of(focal)
        if current is not None:
            current.members.discard(focal)
            if not current.members:
                partition.clusters.remove(current)
        partition.handled.add(focal)
        return FormClusterResult(applied=True, cluster=None)

    for mid in members:
        current = partition.cluster_of(mid)
        if current is not None:
            current.members.discard(mid)
            if not current.members:
                partition.clusters.remove(current)
    cluster = Cluster(cluster_id=partition.new_cluster_id(), members=members)
    partition.clusters.append(cluster)
    partition.handled |= members
    return FormClusterResult(applied=True, cluster=cluster)


def next_unhandled(partition: CorefPartition, matrix: RelationMatrix) -> str | None:
    """Earliest unhandled mention that has at least one co-occurring candidate."""
    for mid in matrix.ids:
        if mid in partition.handled:
            continue
        if equal_candidates(matrix, mid):
            return mid
    return None


def finalize_singletons(partition: CorefPartition, matrix: RelationMatrix) -> None:
    """Make every still-unclustered mention a singleton cluster.

    Only valid once no unhandled focal mentions remain.
    """
    pending = next_unhandled(partition, matrix)
    if pending is not None:
        raise BlockedAdvanceError(
            "unhandled focal mentions remain", blocking_items=[pending]
        )
    clustered = partition.clustered_mentions()
    for mid in matrix.ids:
        if mid not in clustered:
            partition.clusters.append(
                Cluster(cluster_id=partition.new_cluster_id(), members={mid})
            )
            partition.handled.add(mid)


def cluster_relation(matrix: RelationMatrix, a: Cluster, b: Cluster) -> TemporalLabel:
    """Temporal label between two clusters (the label of their representatives).

    Every cross pair must carry the identical label; anything else means the
    engine invariants were bypassed, not that the annotator erred.
    """
    _require_complete(matrix)
    rep_a, rep_b = a.representative(matrix), b.representative(matrix)
    label = matrix.label_between(rep_a, rep_b)
    for x in a.members:
        for y in b.members:
            if matrix.label_between(x, y) != label:
                raise IntegrityError(
                    f"cluster pair ({a.cluster_id}, {b.cluster_id}) has mixed labels: "
                    f"({x}, {y}) is {matrix.label_between(x, y)}, expected {label}"
                )
    assert label is not None
    return label
