/** Deterministic arc-diagram layout: nodes left-to-right by text order. */

import type { Snapshot } from "./types.js";

export interface NodePoint {
  id: string;
  x: number;
  y: number;
}

export interface LayoutBox {
  width: number;
  height: number;
  baseline: number;
  gap: number;
}

export const NODE_GAP = 110;
export const MARGIN = 70;

export function layoutBox(nodeCount: number): LayoutBox {
  const width = MARGIN * 2 + Math.max(0, nodeCount - 1) * NODE_GAP;
  const tallestArc = (nodeCount - 1) * 14 + 30;
  const height = Math.max(220, tallestArc + 120);
  return { width, height, baseline: height - 60, gap: NODE_GAP };
}

/** Included mentions placed on the baseline in order_index order. */
export function layoutNodes(snapshot: Snapshot): NodePoint[] {
  const included = snapshot.graph.nodes
    .filter((n) => n.status !== "excluded")
    .sort((a, b) => a.order_index - b.order_index);
  const box = layoutBox(included.length);
  return included.map((n, i) => ({
    id: n.id,
    x: MARGIN + i * box.gap,
    y: box.baseline,
  }));
}

/** Arc between two baseline nodes; height grows with their distance. */
export function arcPath(from: NodePoint, to: NodePoint): string {
  const [left, right] = from.x <= to.x ? [from, to] : [to, from];
  const span = right.x - left.x;
  const lift = 30 + (span / NODE_GAP) * 14;
  const mid = (left.x + right.x) / 2;
  return `M ${left.x} ${left.y - 14} Q ${mid} ${left.y - 14 - lift} ${right.x} ${right.y - 14}`;
}
