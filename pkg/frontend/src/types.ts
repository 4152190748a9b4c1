/** Wire types mirroring the annotation service responses. */

export type TemporalLabel = "BEFORE" | "AFTER" | "EQUAL" | "VAGUE";
export type Phase = "selection" | "temporal" | "coreference" | "causal" | "done";
export type Provenance = "direct" | "inferred";

export interface MentionNode {
  id: string;
  surface: string;
  start: number;
  end: number;
  order_index: number;
  status: "candidate" | "included" | "excluded";
  cluster: string | null;
}

export interface RelationEdge {
  a: string;
  b: string;
  label: TemporalLabel;
  provenance: Provenance;
  witness: string[];
}

export interface ClusterView {
  id: string;
  members: string[];
  representative: string;
}

export interface CausalEdge {
  cause: string;
  effect: string;
  cause_rep: string;
  effect_rep: string;
}

export interface ConflictView {
  pair: { a: string; b: string };
  mediator: string;
  stored_label: TemporalLabel;
  composed_label: TemporalLabel;
  leg_labels: TemporalLabel[];
  path: string[];
}

export type Unit =
  | { kind: "selection"; mention: string }
  | { kind: "pair"; a: string; b: string }
  | { kind: "coref"; focal: string; candidates: string[] }
  | { kind: "causal"; focal: string; candidates: string[] };

export interface Snapshot {
  session_id: string;
  annotator_id: string;
  doc_id: string;
  phase: Phase;
  text: string;
  temporal_entities: { start: number; end: number }[];
  progress: {
    selection: { classified: number; total: number; included: number };
    temporal: {
      resolved: number;
      direct: number;
      inferred: number;
      unannotated: number;
      conflicts: number;
      total: number;
    };
    coreference: { clusters: number; handled: number };
    causal: { links: number; handled: number };
  };
  current_unit: Unit | null;
  graph: {
    nodes: MentionNode[];
    edges: RelationEdge[];
    clusters: ClusterView[];
    causal_edges: CausalEdge[];
  };
  conflicts: ConflictView[];
  complete: boolean;
}

export interface TemporalResult {
  pair: { a: string; b: string };
  label: TemporalLabel;
  inferred: { a: string; b: string; label: TemporalLabel }[];
  conflicts: ConflictView[];
  downstream: {
    dissolved_clusters: string[];
    requeued_mentions: string[];
    dropped_links: { cause: string; effect: string }[];
  };
}

export interface CorefResult {
  applied: boolean;
  cluster: ClusterView | null;
  membership_conflict: {
    focal: string;
    moves: { mention: string; from_cluster: string }[];
  } | null;
  clusters: ClusterView[];
}

export interface NextResponse {
  phase: Phase;
  phase_complete: boolean;
  unit: Unit | null;
}
