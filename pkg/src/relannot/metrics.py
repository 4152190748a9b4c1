"""Agreement metrics (Cohen's kappa, B-Cubed F1) and workload-reduction reports.

Everything here is a pure function over exported annotations or raw step
counts; nothing touches live session state.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EngineError
from .model import TemporalLabel, invert


@dataclass
class AgreementReport:
    kind: str
    universe_size: int
    observed_agreement: float | None = None
    expected_agreement: float | None = None
    kappa: float | None = None
    bcubed_precision: float | None = None
    bcubed_recall: float | None = None
    bcubed_f1: float | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "universe_size": self.universe_size}
        if self.kappa is not None:
            out.update(
                observed_agreement=self.observed_agreement,
                expected_agreement=self.expected_agreement,
                kappa=self.kappa,
            )
        if self.bcubed_f1 is not None:
            out.update(
                bcubed_precision=self.bcubed_precision,
                bcubed_recall=self.bcubed_recall,
                bcubed_f1=self.bcubed_f1,
            )
        return out


@dataclass
class PhaseWorkload:
    manual_steps: float
    auto_steps: float
    total_pairs: int
    reduction: float

    def to_dict(self) -> dict:
        return {
            "manual_steps": self.manual_steps,
            "auto_steps": self.auto_steps,
            "total_pairs": self.total_pairs,
            "reduction": self.reduction,
        }


@dataclass
class WorkloadReport:
    phases: dict[str, PhaseWorkload]

    def to_dict(self) -> dict:
        return {name: p.to_dict() for name, p in self.phases.items()}


def cohen_kappa(
    labels_a: Sequence, labels_b: Sequence, kind: str = "temporal"
) -> AgreementReport:
    """Chance-corrected pairwise agreement over a shared, fully-labeled item universe."""
    if len(labels_a) != len(labels_b):
        raise EngineError(
            f"annotators labeled different universes ({len(labels_a)} vs {len(labels_b)} items)"
        )
    n = len(labels_a)
    if n == 0:
        raise EngineError("empty item universe")
    observed = sum(1 for x, y in zip(labels_a, labels_b) if x == y) / n
    marg_a = Counter(labels_a)
    marg_b = Counter(labels_b)
    expected = sum(marg_a[c] * marg_b.get(c, 0) for c in marg_a) / (n * n)
    if expected == 1.0:
        kappa = 1.0
    else:
        kappa = (observed - expected) / (1.0 - expected)
    return AgreementReport(
        kind=kind,
        universe_size=n,
        observed_agreement=observed,
        expected_agreement=expected,
        kappa=kappa,
    )


def bcubed_f1(
    partition_a: Iterable[Iterable[str]], partition_b: Iterable[Iterable[str]]
) -> AgreementReport:
    """Per-mention precision/recall of cluster overlap, averaged, with harmonic-mean F1.

    partition_a is scored against partition_b; both must cover the same
    mentions (singletons included).
    """
    cluster_a = {m: frozenset(c) for c in map(frozenset, partition_a) for m in c}
    cluster_b = {m: frozenset(c) for c in map(frozenset, partition_b) for m in c}
    if set(cluster_a) != set(cluster_b):
        raise EngineError("partitions cover different mention sets")
    if not cluster_a:
        raise EngineError("empty partitions")
    precision = 0.0
    recall = 0.0
    for m in cluster_a:
        overlap = len(cluster_a[m] & cluster_b[m])
        precision += overlap / len(cluster_a[m])
        recall += overlap / len(cluster_b[m])
    n = len(cluster_a)
    precision /= n
    recall /= n
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return AgreementReport(
        kind="coref",
        universe_size=n,
        bcubed_precision=precision,
        bcubed_recall=recall,
        bcubed_f1=f1,
    )


def workload_report(
    step_counts: dict[str, Sequence[float] | float],
    total_pairs: int,
    auto_steps: dict[str, float] | None = None,
) -> WorkloadReport:
    """Reduction per phase: 1 - manual_steps / total_pairs.

    step_counts maps phase name to one count or to per-annotator counts, which
    are averaged (the published tables report fractional per-annotator means).
    """
    if total_pairs <= 0:
        raise EngineError("total_pairs must be positive")
    phases: dict[str, PhaseWorkload] = {}
    for phase, counts in step_counts.items():
        values = [float(counts)] if isinstance(counts, (int, float)) else [float(c) for c in counts]
        if not values:
            raise EngineError(f"no step counts for phase {phase}")
        manual = sum(values) / len(values)
        auto = float((auto_steps or {}).get(phase, 0.0))
        reduction = 1.0 - manual / total_pairs
        if not 0.0 <= reduction <= 1.0:
            raise EngineError(
                f"phase {phase}: {manual} manual steps out of {total_pairs} pairs"
            )
        phases[phase] = PhaseWorkload(
            manual_steps=manual,
            auto_steps=auto,
            total_pairs=total_pairs,
            reduction=reduction,
        )
    return WorkloadReport(phases=phases)


def workload_from_session(session) -> WorkloadReport:
    """Workload report for one completed (or in-flight) session."""
    total = session.matrix.total_pairs()
    steps = session.manual_steps()
    return workload_report(
        {
            "temporal": steps["temporal"],
            "coreference": steps["coreference"],
            "causal": steps["causal"],
        },
        total_pairs=total,
        auto_steps={"temporal": len(session.matrix.inferred_cells())},
    )


# -- export alignment ---------------------------------------------------------


def _mention_order(export: dict) -> dict[str, int]:
    return {m["id"]: m["order_index"] for m in export["mentions"]}


def _cluster_of(export: dict) -> dict[str, frozenset[str]]:
    return {m: frozenset(c) for c in export["clusters"] for m in c}


def _mention_pair_labels(export: dict) -> dict[tuple[str, str], str]:
    """Mention-level 4-way labels reconstructed from the cluster-level export."""
    order = _mention_order(export)
    cluster = _cluster_of(export)
    rep = {c: min(c, key=lambda m: order[m]) for c in set(cluster.values())}
    cluster_labels: dict[tuple[str, str], str] = {}
    for entry in export["temporal"]:
        cluster_labels[(entry["a"], entry["b"])] = entry["label"]
    out: dict[tuple[str, str], str] = {}
    ids = sorted(order, key=order.get)
    for i, x in enumerate(ids):
        for y in ids[i + 1 :]:
            if cluster[x] == cluster[y]:
                out[(x, y)] = TemporalLabel.EQUAL.value
                continue
            ra, rb = rep[cluster[x]], rep[cluster[y]]
            if (ra, rb) in cluster_labels:
                out[(x, y)] = cluster_labels[(ra, rb)]
            else:
                out[(x, y)] = invert(TemporalLabel(cluster_labels[(rb, ra)])).value
    return out


def _causal_mention_pairs(export: dict) -> set[tuple[str, str]]:
    """Mention pairs whose containing clusters are causally linked (cause first)."""
    cluster = _cluster_of(export)
    linked = {(link["cause"], link["effect"]) for link in export["causal"]}
    order = _mention_order(export)
    rep = {c: min(c, key=lambda m: order[m]) for c in set(cluster.values())}
    out: set[tuple[str, str]] = set()
    for x in cluster:
        for y in cluster:
            if x == y or cluster[x] == cluster[y]:
                continue
            if (rep[cluster[x]], rep[cluster[y]]) in linked:
                out.add((x, y))
    return out


def build_pair_universe(
    exports: Sequence[dict], kind: str, causal_universe: str = "before-intersection"
) -> tuple[list[tuple[str, str]], list[list[str]]]:
    """Aligned item universe and per-export label vectors for kappa.

    temporal: every canonical mention pair, 4-way labels.
    causal: binary cause/none over mention pairs; the default universe keeps
    only pairs BEFORE under every annotator, "all" keeps every pair.
    """
    if len(exports) < 2:
        raise EngineError("need at least two exports")
    orders = [_mention_order(e) for e in exports]
    if any(set(o) != set(orders[0]) for o in orders[1:]):
        raise EngineError("exports cover different mention sets")
    order = orders[0]
    ids = sorted(order, key=order.get)
    all_pairs = [(x, y) for i, x in enumerate(ids) for y in ids[i + 1 :]]

    if kind == "temporal":
        per_export = [_mention_pair_labels(e) for e in exports]
        return all_pairs, [[labels[p] for p in all_pairs] for labels in per_export]

    if kind == "causal":
        per_export_labels = [_mention_pair_labels(e) for e in exports]
        per_export_links = [_causal_mention_pairs(e) for e in exports]
        if causal_universe == "before-intersection":
            universe = [
                p
                for p in all_pairs
                if all(
                    labels[p] == TemporalLabel.BEFORE.value for labels in per_export_labels
                )
            ]
        elif causal_universe == "all":
            universe = all_pairs
        else:
            raise EngineError(f"unknown causal universe: {causal_universe!r}")
        vectors = [
            ["cause" if p in links else "none" for p in universe]
            for links in per_export_links
        ]
        return universe, vectors

    raise EngineError(f"unknown universe kind: {kind!r}")


def agreement_from_exports(
    exports: Sequence[dict], kind: str, causal_universe: str = "before-intersection"
) -> AgreementReport:
    """Agreement between the first two exports for the given relation kind."""
    if kind == "coref":
        return bcubed_f1(exports[0]["clusters"], exports[1]["clusters"])
    universe, vectors = build_pair_universe(exports, kind, causal_universe=causal_universe)
    if not universe:
        raise EngineError(f"empty {kind} universe for these exports")
    return cohen_kappa(vectors[0], vectors[1], kind=kind)
