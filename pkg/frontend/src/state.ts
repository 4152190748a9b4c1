/** UI view state: a fresh snapshot plus purely-local selection bookkeeping.
 *
 * The view is rebuilt from a new snapshot after every committed action; no
 * relation, closure, or conflict is ever computed on the client.
 */

import type { Snapshot, Unit } from "./types.js";

export interface ViewState {
  snapshot: Snapshot;
  /** checkbox selections (coref/causal panes) pending submission */
  pending: Set<string>;
  /** pair picked by clicking two graph nodes (temporal phase only) */
  selectedPair: [string, string] | null;
  /** first node of an in-progress graph pick */
  pickedNode: string | null;
  /** Prev/Next position within the phase's unit list; -1 follows the server's next unit */
  cursor: number;
  guidelinesOpen: boolean;
  guidelines: Record<string, string>;
}

export const DEFAULT_GUIDELINES: Record<string, string> = {
  selection:
    "Keep only events that actually happened or will definitely happen " +
    "(anchorable on a timeline). Exclude wishes, intentions, conditionals.",
  temporal:
    "Decide which event STARTED first. Use equal for simultaneous starts and " +
    "uncertain when the text does not determine the order.",
  coreference:
    "Tick the highlighted mentions that refer to the same real-world event " +
    "as the green one. Shared participants, time and place are good cues.",
  causal:
    "Tick the preceding events that caused the green one. No cause is a " +
    "valid answer.",
  done: "Review the graph, then export the finished annotation.",
};

export function freshView(snapshot: Snapshot, previous?: ViewState): ViewState {
  return {
    snapshot,
    pending: new Set(),
    selectedPair: null,
    pickedNode: null,
    cursor: -1,
    guidelinesOpen: previous?.guidelinesOpen ?? false,
    guidelines: previous?.guidelines ?? { ...DEFAULT_GUIDELINES },
  };
}

/** Sequential unit list for Prev/Next navigation: all candidates, done or pending. */
export function unitList(snapshot: Snapshot): Unit[] {
  const included = snapshot.graph.nodes
    .filter((n) => n.status === "included")
    .sort((x, y) => x.order_index - y.order_index);
  switch (snapshot.phase) {
    case "selection":
      return snapshot.graph.nodes.map((n) => ({ kind: "selection", mention: n.id }));
    case "temporal": {
      const pairs: Unit[] = [];
      for (let i = 0; i < included.length; i++) {
        for (let j = i + 1; j < included.length; j++) {
          pairs.push({ kind: "pair", a: included[i].id, b: included[j].id });
        }
      }
      return pairs;
    }
    case "coreference":
      return included.map((n) => ({ kind: "coref", focal: n.id, candidates: [] }));
    case "causal":
      return snapshot.graph.clusters.map((c) => ({
        kind: "causal",
        focal: c.id,
        candidates: [],
      }));
    default:
      return [];
  }
}

/** The unit to display: cursor-selected, graph-selected pair, or the server's next. */
export function activeUnit(view: ViewState): Unit | null {
  if (view.snapshot.phase === "temporal" && view.selectedPair) {
    const [a, b] = view.selectedPair;
    return { kind: "pair", a, b };
  }
  if (view.cursor >= 0) {
    const units = unitList(view.snapshot);
    if (units.length > 0) return units[Math.min(view.cursor, units.length - 1)];
  }
  return view.snapshot.current_unit;
}

export function moveCursor(view: ViewState, delta: number): void {
  const units = unitList(view.snapshot);
  if (units.length === 0) return;
  const current = view.cursor >= 0 ? view.cursor : positionOf(view.snapshot.current_unit, units);
  view.cursor = Math.max(0, Math.min(units.length - 1, current + delta));
  view.selectedPair = null;
  view.pickedNode = null;
}

function positionOf(unit: Unit | null, units: Unit[]): number {
  if (!unit) return 0;
  const key = JSON.stringify([unitAnchor(unit)]);
  const index = units.findIndex((u) => JSON.stringify([unitAnchor(u)]) === key);
  return index >= 0 ? index : 0;
}

function unitAnchor(unit: Unit): string[] {
  switch (unit.kind) {
    case "selection":
      return [unit.mention];
    case "pair":
      return [unit.a, unit.b];
    default:
      return [unit.focal];
  }
}

/** Two-click pair selection on the graph; only meaningful in the temporal phase. */
export function pickNode(view: ViewState, nodeId: string): void {
  if (view.snapshot.phase !== "temporal") return;
  if (view.pickedNode === null || view.pickedNode === nodeId) {
    view.pickedNode = nodeId;
    return;
  }
  const order = new Map(view.snapshot.graph.nodes.map((n) => [n.id, n.order_index]));
  const first = view.pickedNode;
  const a = (order.get(first) ?? 0) <= (order.get(nodeId) ?? 0) ? first : nodeId;
  const b = a === first ? nodeId : first;
  view.selectedPair = [a, b];
  view.pickedNode = null;
  view.cursor = -1;
}

export function toggleCheck(view: ViewState, id: string): void {
  if (view.pending.has(id)) view.pending.delete(id);
  else view.pending.add(id);
}
