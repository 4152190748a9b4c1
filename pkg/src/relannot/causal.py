"""Causal links over coreference clusters: each event against all its predecessors.

A cause must temporally precede its effect, so the candidate set for a focal
cluster is exactly the clusters BEFORE it. Links are annotator-asserted only;
there is deliberately no closure here (causality is localized per pair).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coref import CorefPartition, cluster_relation
from .errors import GateViolation
from .model import TemporalLabel
from .temporal import RelationMatrix


@dataclass
class CausalState:
    """Asserted cause->effect cluster links plus the visited-focal bookkeeping."""

    links: set[tuple[str, str]] = field(default_factory=set)
    handled: set[str] = field(default_factory=set)

    def causes_of(self, cluster_id: str) -> set[str]:
        return {c for c, e in self.links if e == cluster_id}


def _clusters_in_text_order(partition: CorefPartition, matrix: RelationMatrix) -> list:
    return sorted(
        partition.clusters, key=lambda c: matrix.index_of(c.representative(matrix))
    )


def preceding_candidates(
    partition: CorefPartition, matrix: RelationMatrix, focal: str
) -> list[str]:
    """Cluster ids temporally BEFORE the focal cluster, in text order of representatives."""
    focal_cluster = partition.cluster_by_id(focal)
    out = []
    for c in _clusters_in_text_order(partition, matrix):
        if c.cluster_id == focal_cluster.cluster_id:
            continue
        if cluster_relation(matrix, c, focal_cluster) is TemporalLabel.BEFORE:
            out.append(c.cluster_id)
    return out


def record_causes(
    state: CausalState,
    partition: CorefPartition,
    matrix: RelationMatrix,
    focal: str,
    causes: set[str],
) -> None:
    """Assert the given predecessors as causes of the focal cluster.

    An empty set is a valid "no cause" answer; the focal still counts as
    visited. Non-preceding clusters are rejected outright.
    """
    candidates = set(preceding_candidates(partition, matrix, focal))
    stray = set(causes) - candidates
    if stray:
        raise GateViolation(
            f"cause must precede effect; not candidates for {focal!r}: {sorted(stray)}"
        )
    for c in causes:
        state.links.add((c, focal))
    state.handled.add(focal)


def next_unhandled_causal(
    state: CausalState, partition: CorefPartition, matrix: RelationMatrix
) -> str | None:
    """Earliest unvisited cluster that has at least one preceding candidate."""
    for c in _clusters_in_text_order(partition, matrix):
        if c.cluster_id in state.handled:
            continue
        if preceding_candidates(partition, matrix, c.cluster_id):
            return c.cluster_id
    return None
