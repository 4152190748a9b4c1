"""Complete and consistent event-relation annotation: engine, service, CLI.

Temporal relations are propagated through a composition-table transitive
closure with conflict witnesses; coreference is gated on EQUAL pairs; causal
links are gated on BEFORE cluster pairs. A layered session state machine ties
the phases together and feeds the agreement and workload metrics.
"""
from .causal import CausalState, next_unhandled_causal, preceding_candidates, record_causes
from .coref import (
    Cluster,
    CorefPartition,
    cluster_relation,
    equal_candidates,
    finalize_singletons,
    form_cluster,
    next_unhandled,
)
from .errors import (
    BlockedAdvanceError,
    DocumentError,
    EngineError,
    GateViolation,
    IncompleteAnnotationError,
    IntegrityError,
    PhaseError,
    SessionFormatError,
    UnknownIdError,
)
from .metrics import (
    AgreementReport,
    WorkloadReport,
    agreement_from_exports,
    bcubed_f1,
    build_pair_universe,
    cohen_kappa,
    workload_from_session,
    workload_report,
)
from .model import (
    Document,
    EventMention,
    PairKey,
    TemporalLabel,
    canonical_pair,
    document_from_dict,
    invert,
    parse_document,
    serialize_document,
)
from .session import (
    ActionRecord,
    AnnotationSession,
    TaskPhase,
    start_session,
    validate_export,
)
from .simulate import SimulationConfig, run_simulation, synthetic_document
from .temporal import (
    ANNOTATE,
    AnnotationDelta,
    CompletionStatus,
    ConflictWitness,
    Direct,
    Inferred,
    RelationMatrix,
    compose,
    is_definite,
)

__version__ = "0.1.0"

__all__ = [
    "ANNOTATE",
    "ActionRecord",
    "AgreementReport",
    "AnnotationDelta",
    "AnnotationSession",
    "BlockedAdvanceError",
    "CausalState",
    "Cluster",
    "CompletionStatus",
    "ConflictWitness",
    "CorefPartition",
    "Direct",
    "Document",
    "DocumentError",
    "EngineError",
    "EventMention",
    "GateViolation",
    "IncompleteAnnotationError",
    "Inferred",
    "IntegrityError",
    "PairKey",
    "PhaseError",
    "RelationMatrix",
    "SessionFormatError",
    "SimulationConfig",
    "TaskPhase",
    "TemporalLabel",
    "UnknownIdError",
    "WorkloadReport",
    "agreement_from_exports",
    "bcubed_f1",
    "build_pair_universe",
    "canonical_pair",
    "cluster_relation",
    "cohen_kappa",
    "compose",
    "document_from_dict",
    "equal_candidates",
    "finalize_singletons",
    "form_cluster",
    "invert",
    "is_definite",
    "next_unhandled",
    "next_unhandled_causal",
    "parse_document",
    "preceding_candidates",
    "record_causes",
    "run_simulation",
    "serialize_document",
    "start_session",
    "synthetic_document",
    "validate_export",
    "workload_from_session",
    "workload_report",
]
