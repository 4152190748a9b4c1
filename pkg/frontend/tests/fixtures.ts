import type { Snapshot } from "../src/types.js";

/** Snapshot of a 4-event session mid-temporal-phase (one EQUAL pair annotated). */
export function fig2Snapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  const surfaces = ["accident", "collided", "damage", "responded"];
  const starts = [8, 70, 112, 156];
  return {
    session_id: "s1",
    annotator_id: "a1",
    doc_id: "sample-traffic",
    phase: "temporal",
    text:
      "A major accident happened on the highway this morning when two trucks " +
      "collided near the bridge, causing serious damage to both vehicles. " +
      "Emergency services responded within minutes.",
    temporal_entities: [{ start: 41, end: 53 }],
    progress: {
      selection: { classified: 4, total: 4, included: 4 },
      temporal: { resolved: 1, direct: 1, inferred: 0, unannotated: 5, conflicts: 0, total: 6 },
      coreference: { clusters: 0, handled: 0 },
      causal: { links: 0, handled: 0 },
    },
    current_unit: { kind: "pair", a: "e2", b: "e3" },
    graph: {
      nodes: surfaces.map((surface, i) => ({
        id: `e${i + 1}`,
        surface,
        start: starts[i],
        end: starts[i] + surface.length,
        order_index: i,
        status: "included" as const,
        cluster: null,
      })),
      edges: [
        { a: "e1", b: "e2", label: "EQUAL" as const, provenance: "direct" as const, witness: [] },
      ],
      clusters: [],
      causal_edges: [],
    },
    conflicts: [],
    complete: false,
    ...overrides,
  };
}
